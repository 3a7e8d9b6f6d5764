#pragma once

#include <cstdint>
#include <vector>

#include "psbf/matrix.hpp"

namespace psbf {

struct EncoderParams {
    std::int32_t m = 0;  // rows
    std::int32_t n = 0;  // cols
    std::int32_t d = 0;  // ones per column
    std::uint64_t seed = 0;
};

/// Random left d-regular encoder. Column supports are assigned in blocks from
/// uniformly drawn permutations of [m]: each permutation covers
/// alpha = floor(m/d) columns with pairwise disjoint supports, so every column
/// has exactly d ones and every row at most beta = ceil(n/alpha) ones.
/// Deterministic in the seed.
BinaryColumnMatrix generate_encoder(const EncoderParams& params);

enum class OrderDirection { Descending, Ascending };

struct ColumnOrderResult {
    BinaryColumnMatrix A;
    SparseCodeMatrix X;                     // empty when no X supplied
    std::vector<std::int32_t> permutation;  // position i holds original column permutation[i]
};

/// Sort columns by the rational number read off the column bits, row 0 most
/// significant. When X is supplied its rows are permuted to match. With
/// require_distinct, duplicate columns raise an error; otherwise ties keep
/// their original relative order.
ColumnOrderResult order_columns(const BinaryColumnMatrix& A, const SparseCodeMatrix* X,
                                OrderDirection direction = OrderDirection::Descending,
                                bool require_distinct = false);

}  // namespace psbf
