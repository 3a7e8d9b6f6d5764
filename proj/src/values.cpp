#include "psbf/values.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace psbf {

std::int32_t frequency(double alpha, const SparseRealVector& r, double tol) {
    if (alpha == 0.0) throw std::invalid_argument("frequency: alpha must be nonzero");
    std::int32_t count = 0;
    for (double v : r.val)
        if (approx_equal(v, alpha, tol)) ++count;
    if (approx_equal(0.0, alpha, tol)) count += r.dim - std::int32_t(r.nnz());
    return count;
}

std::vector<std::int32_t> locations(double alpha, const SparseRealVector& r, double tol) {
    if (alpha == 0.0) throw std::invalid_argument("locations: alpha must be nonzero");
    std::vector<std::int32_t> out;
    if (approx_equal(0.0, alpha, tol)) {
        // Degenerate near-zero alpha: every implicit zero matches too.
        std::size_t e = 0;
        for (std::int32_t j = 0; j < r.dim; ++j) {
            if (e < r.nnz() && r.idx[e] == j) {
                if (approx_equal(r.val[e], alpha, tol)) out.push_back(j);
                ++e;
            } else {
                out.push_back(j);
            }
        }
        return out;
    }
    for (std::size_t e = 0; e < r.nnz(); ++e)
        if (approx_equal(r.val[e], alpha, tol)) out.push_back(r.idx[e]);
    return out;
}

std::vector<ValueGroup> group_values(const SparseRealVector& r, double tol) {
    const std::size_t n = r.nnz();
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (r.val[a] != r.val[b]) return r.val[a] < r.val[b];
        return r.idx[a] < r.idx[b];
    });

    std::vector<ValueGroup> groups;
    std::size_t i = 0;
    while (i < n) {
        double seed = r.val[order[i]];
        ValueGroup g;
        std::size_t j = i;
        while (j < n && approx_equal(r.val[order[j]], seed, tol)) {
            g.locations.push_back(r.idx[order[j]]);
            ++j;
        }
        std::sort(g.locations.begin(), g.locations.end());
        groups.push_back(std::move(g));
        i = j;
    }

    // Scan order: by first row occurrence, value taken at that row.
    std::sort(groups.begin(), groups.end(),
              [](const ValueGroup& a, const ValueGroup& b) {
                  return a.locations.front() < b.locations.front();
              });
    for (ValueGroup& g : groups) {
        std::int32_t first = g.locations.front();
        auto it = std::lower_bound(r.idx.begin(), r.idx.end(), first);
        g.value = r.val[std::size_t(it - r.idx.begin())];
    }
    return groups;
}

}  // namespace psbf
