#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "psbf/matrix.hpp"

namespace psbf {

struct ExpansionReport {
    std::int32_t k = 0;          // largest set size tested
    double epsilon_hat = 0.0;    // tightest expansion parameter over all tested sets
    std::vector<std::int32_t> worst_set;
};

struct EnumerationGuard {
    std::int32_t max_cols = 24;
    std::int32_t max_set = 5;
};

/// Brute force over every column subset of size 1..k: epsilon_hat =
/// max_S (1 - |N(S)| / (d|S|)). The matrix is a (k,eps,d)-expander exactly for
/// eps > epsilon_hat. Requires a left d-regular matrix within the guard.
ExpansionReport expansion_oracle(const BinaryColumnMatrix& A, std::int32_t k,
                                 const EnumerationGuard& guard = {});

/// Rows adjacent to exactly one column of S.
std::int32_t unique_neighbour_count(const BinaryColumnMatrix& A,
                                    std::span<const std::int32_t> S);

/// All three adjacency-matrix properties over every subset up to size k:
/// |N(S)| > (1-eps)d|S|, |N1(S)| > (1-2eps)d|S|, and joint support overlap
/// < 2*eps*d for |S| >= 2.
bool overlap_bound_check(const BinaryColumnMatrix& A, double epsilon, std::int32_t k,
                         const EnumerationGuard& guard = {});

/// Strict Definition-1 test at a given epsilon (first property only).
bool is_expander_at(const BinaryColumnMatrix& A, double epsilon, std::int32_t k,
                    const EnumerationGuard& guard = {});

}  // namespace psbf
