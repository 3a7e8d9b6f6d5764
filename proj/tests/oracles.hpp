// Independent enumeration oracles used by the unit and acceptance suites.
// These deliberately take different algorithmic routes from the library so
// agreement is evidence, not tautology.
#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "psbf/matrix.hpp"
#include "psbf/rng.hpp"

namespace oracle {

inline psbf::SparseRealVector make_sparse(std::int32_t dim,
                                          std::vector<std::pair<std::int32_t, double>> entries) {
    std::sort(entries.begin(), entries.end());
    psbf::SparseRealVector v(dim);
    for (auto& [i, x] : entries)
        if (x != 0.0) v.push(i, x);
    return v;
}

inline std::vector<double> to_dense(const psbf::SparseRealVector& v) {
    std::vector<double> out(std::size_t(v.dim), 0.0);
    for (std::size_t e = 0; e < v.nnz(); ++e) out[std::size_t(v.idx[e])] = v.val[e];
    return out;
}

// Literal dense scan of |{j : |r_j - alpha| <= tol*max(1,|alpha|)}|.
inline std::int32_t frequency(double alpha, const std::vector<double>& r, double tol) {
    std::int32_t c = 0;
    for (double x : r)
        if (std::abs(x - alpha) <= tol * std::max(1.0, std::abs(alpha))) ++c;
    return c;
}

inline std::vector<std::int32_t> locations(double alpha, const std::vector<double>& r,
                                           double tol) {
    std::vector<std::int32_t> out;
    for (std::size_t j = 0; j < r.size(); ++j)
        if (std::abs(r[j] - alpha) <= tol * std::max(1.0, std::abs(alpha)))
            out.push_back(std::int32_t(j));
    return out;
}

// Dense row-major product for residual checks.
inline std::vector<std::vector<double>> dense_product(const psbf::BinaryColumnMatrix& A,
                                                      const psbf::SparseCodeMatrix& X) {
    std::vector<std::vector<double>> Y(std::size_t(A.rows),
                                       std::vector<double>(std::size_t(X.cols), 0.0));
    std::vector<std::vector<double>> Ad(std::size_t(A.rows),
                                        std::vector<double>(std::size_t(A.cols), 0.0));
    for (std::int32_t l = 0; l < A.cols; ++l)
        for (std::int32_t r : A.support(l)) Ad[std::size_t(r)][std::size_t(l)] = 1.0;
    for (std::int32_t c = 0; c < X.cols; ++c) {
        std::vector<double> x = to_dense(X.columns[std::size_t(c)]);
        for (std::int32_t r = 0; r < A.rows; ++r) {
            double acc = 0.0;
            for (std::int32_t l = 0; l < A.cols; ++l) acc += Ad[std::size_t(r)][std::size_t(l)] * x[std::size_t(l)];
            Y[std::size_t(r)][std::size_t(c)] = acc;
        }
    }
    return Y;
}

// Recursive subset enumeration with std::set unions.
struct ExpansionResult {
    double epsilon_hat;
    std::vector<std::int32_t> worst;
};

inline void expansion_recurse(const psbf::BinaryColumnMatrix& A, std::int32_t k,
                              std::int32_t start, std::vector<std::int32_t>& chosen,
                              ExpansionResult& best) {
    if (!chosen.empty()) {
        std::set<std::int32_t> nbr;
        for (std::int32_t l : chosen)
            for (std::int32_t r : A.support(l)) nbr.insert(r);
        const double d = double(A.degree(chosen.front()));
        const double eps = 1.0 - double(nbr.size()) / (d * double(chosen.size()));
        if (eps > best.epsilon_hat) {
            best.epsilon_hat = eps;
            best.worst = chosen;
        }
    }
    if (std::int32_t(chosen.size()) == k) return;
    for (std::int32_t c = start; c < A.cols; ++c) {
        chosen.push_back(c);
        expansion_recurse(A, k, c + 1, chosen, best);
        chosen.pop_back();
    }
}

inline ExpansionResult expansion(const psbf::BinaryColumnMatrix& A, std::int32_t k) {
    ExpansionResult best{-1.0, {}};
    std::vector<std::int32_t> chosen;
    expansion_recurse(A, k, 0, chosen, best);
    return best;
}

// Dense row scan for |N1(S)|.
inline std::int32_t unique_neighbours(const psbf::BinaryColumnMatrix& A,
                                      const std::vector<std::int32_t>& S) {
    std::int32_t count = 0;
    for (std::int32_t r = 0; r < A.rows; ++r) {
        std::int32_t hits = 0;
        for (std::int32_t l : S)
            for (std::int32_t row : A.support(l))
                if (row == r) ++hits;
        if (hits == 1) ++count;
    }
    return count;
}

// Dissociation via signed {-1,0,1} combinations: x is dissociated iff no
// nonzero signed combination of its nonzeros lands within tol of zero.
inline bool dissociated(const psbf::SparseRealVector& x, double tol) {
    const std::size_t s = x.nnz();
    std::vector<std::int32_t> signs(s, -1);
    while (true) {
        bool all_zero = true;
        double sum = 0.0;
        for (std::size_t i = 0; i < s; ++i) {
            if (signs[i] != 0) all_zero = false;
            sum += signs[i] * x.val[i];
        }
        if (!all_zero && std::abs(sum) <= tol) return false;
        std::size_t pos = 0;
        while (pos < s && signs[pos] == 1) signs[pos++] = -1;
        if (pos == s) break;
        ++signs[pos];
    }
    return true;
}

// Random left-regular matrix with i.i.d. uniform column supports (not the
// permutation-block construction; used to exercise the oracles broadly).
inline psbf::BinaryColumnMatrix random_regular(std::int32_t m, std::int32_t n, std::int32_t d,
                                               psbf::Rng& rng) {
    psbf::BinaryColumnMatrix A(m, n);
    std::vector<std::int32_t> pool(static_cast<std::size_t>(m));
    for (std::int32_t i = 0; i < m; ++i) pool[std::size_t(i)] = i;
    for (std::int32_t l = 0; l < n; ++l) {
        for (std::int32_t t = 0; t < d; ++t) {
            std::int32_t j = t + std::int32_t(rng.below(std::uint64_t(m - t)));
            std::swap(pool[std::size_t(t)], pool[std::size_t(j)]);
        }
        auto& s = A.supports[std::size_t(l)];
        s.assign(pool.begin(), pool.begin() + d);
        std::sort(s.begin(), s.end());
    }
    return A;
}

}  // namespace oracle
