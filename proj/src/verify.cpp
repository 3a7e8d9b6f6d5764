#include "psbf/verify.hpp"

#include <algorithm>

#include "psbf/kern.hpp"
#include "psbf/model.hpp"
#include "psbf/values.hpp"

namespace psbf {
namespace {

bool support_contained(std::span<const std::int32_t> small, std::span<const std::int32_t> big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

PermutationMatch match_up_to_permutation(const BinaryColumnMatrix& Ahat,
                                         const SparseCodeMatrix& Xhat,
                                         const BinaryColumnMatrix& A, const SparseCodeMatrix& X,
                                         double tol) {
    if (Ahat.rows != A.rows || Ahat.cols != A.cols || Xhat.rows != X.rows ||
        Xhat.cols != X.cols || Ahat.cols != Xhat.rows)
        throw std::invalid_argument("match_up_to_permutation: shape mismatch");

    const std::int32_t n = A.cols;
    PermutationMatch out;
    out.mapping.assign(std::size_t(n), -1);
    out.containment = true;

    // Row incidence of the ground truth narrows the containment candidates.
    std::vector<std::vector<std::int32_t>> row_cols(std::size_t(A.rows));
    for (std::int32_t l = 0; l < n; ++l)
        for (std::int32_t r : A.support(l)) row_cols[std::size_t(r)].push_back(l);

    std::vector<char> taken(std::size_t(n), 0);
    for (std::int32_t l = 0; l < n; ++l) {
        auto s = Ahat.support(l);
        if (s.empty()) continue;
        std::int32_t candidate = -1;
        for (std::int32_t h : row_cols[std::size_t(s.front())]) {
            if (!support_contained(s, A.support(h))) continue;
            if (candidate >= 0)
                throw AmbiguousContainment(
                    "match_up_to_permutation: column contained in two ground-truth columns");
            candidate = h;
        }
        if (candidate < 0) {
            out.containment = false;
            continue;
        }
        if (taken[std::size_t(candidate)]) {
            out.containment = false;
            continue;
        }
        taken[std::size_t(candidate)] = 1;
        out.mapping[std::size_t(l)] = candidate;
        ++out.matched_columns;
    }

    // Code rows must follow their encoder columns and agree in value.
    for (std::int32_t c = 0; c < Xhat.cols; ++c) {
        const SparseRealVector& xh = Xhat.columns[std::size_t(c)];
        const SparseRealVector& xt = X.columns[std::size_t(c)];
        for (std::size_t e = 0; e < xh.nnz(); ++e) {
            const std::int32_t mapped = out.mapping[std::size_t(xh.idx[e])];
            if (mapped < 0) {
                out.containment = false;
                continue;
            }
            auto it = std::lower_bound(xt.idx.begin(), xt.idx.end(), mapped);
            if (it == xt.idx.end() || *it != mapped) {
                out.containment = false;
                continue;
            }
            const double truth = xt.val[std::size_t(it - xt.idx.begin())];
            if (!approx_equal(xh.val[e], truth, tol)) out.containment = false;
        }
    }

    out.exact = out.containment && out.matched_columns == n;
    if (out.exact) {
        for (std::int32_t l = 0; l < n && out.exact; ++l)
            if (Ahat.degree(l) != A.degree(out.mapping[std::size_t(l)])) out.exact = false;
        if (out.exact && Xhat.nnz() != X.nnz()) out.exact = false;
    }
    return out;
}

bool singleton_bound_check(const BinaryColumnMatrix& A, const SparseRealVector& z,
                           double epsilon, std::int32_t d, double tol) {
    if (z.dim != A.cols) throw std::invalid_argument("singleton_bound_check: shape mismatch");
    std::vector<double> r(std::size_t(A.rows), 0.0);
    for (std::size_t e = 0; e < z.nnz(); ++e)
        for (std::int32_t row : A.support(z.idx[e])) r[std::size_t(row)] += z.val[e];
    const SparseRealVector rv = sparsify(r, r, 0.0);

    std::int64_t frequent = 0;
    const double occurrence_threshold = (1.0 - 2.0 * epsilon) * d;
    for (std::size_t e = 0; e < z.nnz(); ++e)
        if (count_gt(frequency(z.val[e], rv, tol), occurrence_threshold)) ++frequent;

    const double bound = double(z.nnz()) / ((1.0 + 2.0 * epsilon) * d);
    return double(frequent) >= bound;
}

bool uniqueness_certificate(const DenseMatrix& Y, const BinaryColumnMatrix& Ahat,
                            const SparseCodeMatrix& Xhat, double epsilon, std::int32_t d,
                            double tol, std::int32_t k, std::int32_t dissoc_guard) {
    (void)epsilon;  // the class is parameterised by eps <= 1/6; nothing numeric to test here
    if (Y.rows != Ahat.rows || Ahat.cols != Xhat.rows || Xhat.cols != Y.cols)
        throw std::invalid_argument("uniqueness_certificate: shape mismatch");

    for (std::int32_t l = 0; l < Ahat.cols; ++l)
        if (Ahat.degree(l) != d) return false;
    for (const SparseRealVector& col : Xhat.columns) {
        if (k > 0 && std::int32_t(col.nnz()) > k) return false;
        if (std::int32_t(col.nnz()) <= dissoc_guard && !verify_dissociated(col, tol, dissoc_guard))
            return false;
    }

    const DenseMatrix R = residual(Y, Ahat, Xhat);
    return kern::active().all_within_scaled_tol(R.data.data(), Y.data.data(), R.data.size(), tol);
}

}  // namespace psbf
