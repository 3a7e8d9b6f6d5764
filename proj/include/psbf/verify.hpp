#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "psbf/matrix.hpp"

namespace psbf {

/// Two candidate true columns contain the same reconstruction column: the
/// ground truth cannot be an expander with separated columns.
struct AmbiguousContainment : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PermutationMatch {
    std::vector<std::int32_t> mapping;  // reconstruction column -> true column, -1 if unmatched
    bool containment = false;           // support-subset relations hold under the mapping
    bool exact = false;                 // bijection with equal supports and equal values
    std::int32_t matched_columns = 0;
};

/// Greedy support-containment matching of the reconstruction against the
/// ground truth: each nonzero Ahat column must sit inside exactly one A
/// column, the induced row permutation must carry supp(Xhat) into supp(X)
/// with equal values, and exactness additionally needs the map to be a
/// bijection with support equality and full value equality.
PermutationMatch match_up_to_permutation(const BinaryColumnMatrix& Ahat,
                                         const SparseCodeMatrix& Xhat,
                                         const BinaryColumnMatrix& A, const SparseCodeMatrix& X,
                                         double tol);

/// With r = A*z: at least |supp(z)|/((1+2eps)d) values occur more than
/// (1-2eps)d times in r.
bool singleton_bound_check(const BinaryColumnMatrix& A, const SparseRealVector& z,
                           double epsilon, std::int32_t d, double tol);

/// Certifies that (Ahat, Xhat) is the unique factorisation of Y in its class:
/// Y == Ahat*Xhat within tol, every Ahat column complete (degree d), every
/// Xhat column at most k-sparse (when k > 0) and dissociated wherever the
/// subset-sum enumeration guard allows checking.
bool uniqueness_certificate(const DenseMatrix& Y, const BinaryColumnMatrix& Ahat,
                            const SparseCodeMatrix& Xhat, double epsilon, std::int32_t d,
                            double tol, std::int32_t k = 0, std::int32_t dissoc_guard = 14);

}  // namespace psbf
