#include "psbf/encoder.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "psbf/rng.hpp"

namespace psbf {

BinaryColumnMatrix generate_encoder(const EncoderParams& params) {
    const auto [m, n, d, seed] = params;
    if (m <= 0 || n <= 0 || d <= 0) throw std::invalid_argument("generate_encoder: dimensions must be positive");
    if (d > m) throw std::invalid_argument("generate_encoder: d must not exceed m");

    const std::int32_t alpha = m / d;            // columns per permutation
    const std::int32_t beta = (n + alpha - 1) / alpha;  // permutations needed

    BinaryColumnMatrix A(m, n);
    Rng rng(seed);
    std::vector<std::int32_t> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);

    std::int32_t l = 0;
    for (std::int32_t i = 0; i < beta; ++i) {
        rng.shuffle(std::span<std::int32_t>(perm));
        const std::int32_t omega = std::min(n - l, alpha);
        for (std::int32_t j = 0; j < omega; ++j) {
            const std::int32_t c = j * d;
            auto& support = A.supports[std::size_t(l)];
            support.assign(perm.begin() + c, perm.begin() + c + d);
            std::sort(support.begin(), support.end());
            ++l;
        }
    }
    return A;
}

namespace {

// Numeric order of two columns read as binary fractions, row 0 most
// significant: at the first differing row the column holding a one is larger;
// a column extending a common prefix is larger.
int compare_as_number(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
    std::size_t k = 0;
    for (; k < a.size() && k < b.size(); ++k) {
        if (a[k] != b[k]) return a[k] < b[k] ? 1 : -1;
    }
    if (a.size() == b.size()) return 0;
    return a.size() > b.size() ? 1 : -1;
}

}  // namespace

ColumnOrderResult order_columns(const BinaryColumnMatrix& A, const SparseCodeMatrix* X,
                                OrderDirection direction, bool require_distinct) {
    if (X != nullptr && X->rows != A.cols)
        throw std::invalid_argument("order_columns: X row count must equal A column count");

    std::vector<std::int32_t> perm(std::size_t(A.cols));
    std::iota(perm.begin(), perm.end(), 0);
    const bool desc = direction == OrderDirection::Descending;
    std::stable_sort(perm.begin(), perm.end(), [&](std::int32_t a, std::int32_t b) {
        int cmp = compare_as_number(A.support(a), A.support(b));
        return desc ? cmp > 0 : cmp < 0;
    });

    if (require_distinct) {
        for (std::size_t i = 1; i < perm.size(); ++i) {
            if (compare_as_number(A.support(perm[i - 1]), A.support(perm[i])) == 0)
                throw std::runtime_error("order_columns: duplicate columns, no strict total order");
        }
    }

    ColumnOrderResult out;
    out.permutation = perm;
    out.A = BinaryColumnMatrix(A.rows, A.cols);
    for (std::int32_t i = 0; i < A.cols; ++i)
        out.A.supports[std::size_t(i)] = A.supports[std::size_t(perm[std::size_t(i)])];

    if (X != nullptr) {
        std::vector<std::int32_t> inverse(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i) inverse[std::size_t(perm[i])] = std::int32_t(i);
        out.X = SparseCodeMatrix(X->rows, X->cols);
        for (std::int32_t c = 0; c < X->cols; ++c) {
            const SparseRealVector& src = X->columns[std::size_t(c)];
            std::vector<std::pair<std::int32_t, double>> entries;
            entries.reserve(src.nnz());
            for (std::size_t e = 0; e < src.nnz(); ++e)
                entries.emplace_back(inverse[std::size_t(src.idx[e])], src.val[e]);
            std::sort(entries.begin(), entries.end());
            SparseRealVector& dst = out.X.columns[std::size_t(c)];
            for (auto& [r, v] : entries) dst.push(r, v);
        }
    }
    return out;
}

}  // namespace psbf
