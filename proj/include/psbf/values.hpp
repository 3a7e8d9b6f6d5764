#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "psbf/matrix.hpp"

namespace psbf {

/// Relative tolerance equality: |a - ref| <= tol * max(1, |ref|).
inline bool approx_equal(double a, double ref, double tol) {
    return std::abs(a - ref) <= tol * std::max(1.0, std::abs(ref));
}

// Integer counts compared against real thresholds like 2*eps*d. The
// thresholds are small rationals; when a computed threshold lands within
// rounding dust of an integer the comparison snaps to that integer so the
// inequality is evaluated as written, not as perturbed by the last bit.
namespace detail {
inline double snap(double t) {
    double r = std::round(t);
    if (std::abs(t - r) <= 1e-9 * std::max(1.0, std::abs(t))) return r;
    return t;
}
}  // namespace detail

inline bool count_gt(std::int64_t count, double threshold) {
    return double(count) > detail::snap(threshold);
}
inline bool count_ge(std::int64_t count, double threshold) {
    return double(count) >= detail::snap(threshold);
}
inline bool count_lt(std::int64_t count, double threshold) {
    return double(count) < detail::snap(threshold);
}

/// One tol-equal value class of a vector: the value, where it occurs, how often.
struct ValueGroup {
    double value = 0.0;
    std::vector<std::int32_t> locations;  // sorted row indices

    std::int32_t count() const { return std::int32_t(locations.size()); }
};

/// Number of entries of r within tol of alpha. alpha must be nonzero.
/// Implicit zero entries of r participate (they match only when alpha itself
/// is within tol of zero).
std::int32_t frequency(double alpha, const SparseRealVector& r, double tol);

/// Sorted indices where alpha occurs in r; |result| == frequency(alpha,r,tol).
std::vector<std::int32_t> locations(double alpha, const SparseRealVector& r, double tol);

/// Partition the nonzeros of r into tol-equal groups, ordered by first row
/// occurrence. Done as sort-by-value + seeded absorption rather than the
/// quadratic scan; identical whenever distinct values are separated by more
/// than the tolerance.
std::vector<ValueGroup> group_values(const SparseRealVector& r, double tol);

}  // namespace psbf
