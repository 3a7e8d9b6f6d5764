#include "psbf/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace psbf {

std::int32_t PackedBits::popcount() const {
    return std::int32_t(kern::active().popcount_and(words.data(), words.data(), words.size()));
}

bool SparseRealVector::invariants_ok() const {
    if (idx.size() != val.size()) return false;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 0 || idx[i] >= dim) return false;
        if (i > 0 && idx[i] <= idx[i - 1]) return false;
        if (val[i] == 0.0) return false;
    }
    return true;
}

std::size_t SparseCodeMatrix::nnz() const {
    std::size_t total = 0;
    for (const auto& c : columns) total += c.nnz();
    return total;
}

std::size_t BinaryColumnMatrix::nnz() const {
    std::size_t total = 0;
    for (const auto& s : supports) total += s.size();
    return total;
}

bool BinaryColumnMatrix::invariants_ok() const {
    for (const auto& s : supports) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] < 0 || s[i] >= rows) return false;
            if (i > 0 && s[i] <= s[i - 1]) return false;
        }
    }
    return std::int32_t(supports.size()) == cols;
}

double DenseMatrix::frobenius() const {
    return std::sqrt(kern::active().frobenius_sq(data.data(), data.size()));
}

std::int32_t inner_product(std::span<const std::int32_t> w1, std::span<const std::int32_t> w2) {
    std::int32_t count = 0;
    std::size_t i = 0, j = 0;
    while (i < w1.size() && j < w2.size()) {
        if (w1[i] < w2[j]) {
            ++i;
        } else if (w1[i] > w2[j]) {
            ++j;
        } else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

void residual_column(std::span<const double> y, const BinaryColumnMatrix& Ahat,
                     const SparseRealVector& xcol, std::span<double> r) {
    std::copy(y.begin(), y.end(), r.begin());
    for (std::size_t e = 0; e < xcol.nnz(); ++e) {
        double v = xcol.val[e];
        for (std::int32_t row : Ahat.support(xcol.idx[e])) r[std::size_t(row)] -= v;
    }
}

DenseMatrix residual(const DenseMatrix& Y, const BinaryColumnMatrix& Ahat,
                     const SparseCodeMatrix& Xhat) {
    if (Y.rows != Ahat.rows || Ahat.cols != Xhat.rows || Xhat.cols != Y.cols)
        throw std::invalid_argument("residual: shape mismatch");
    DenseMatrix R(Y.rows, Y.cols);
    for (std::int32_t i = 0; i < Y.cols; ++i) {
        residual_column(std::span(Y.col(i), std::size_t(Y.rows)), Ahat, Xhat.columns[std::size_t(i)],
                        std::span(R.col(i), std::size_t(R.rows)));
    }
    return R;
}

DenseMatrix multiply(const BinaryColumnMatrix& A, const SparseCodeMatrix& X) {
    if (A.cols != X.rows) throw std::invalid_argument("multiply: shape mismatch");
    DenseMatrix Y(A.rows, X.cols);
    for (std::int32_t i = 0; i < X.cols; ++i) {
        const SparseRealVector& x = X.columns[std::size_t(i)];
        double* y = Y.col(i);
        for (std::size_t e = 0; e < x.nnz(); ++e) {
            double v = x.val[e];
            for (std::int32_t row : A.support(x.idx[e])) y[std::size_t(row)] += v;
        }
    }
    return Y;
}

SparseRealVector sparsify(std::span<const double> r, std::span<const double> ref, double tol) {
    SparseRealVector out(std::int32_t(r.size()));
    for (std::size_t j = 0; j < r.size(); ++j) {
        double bound = tol * std::max(1.0, std::abs(ref[j]));
        if (std::abs(r[j]) > bound) out.push(std::int32_t(j), r[j]);
    }
    return out;
}

}  // namespace psbf
