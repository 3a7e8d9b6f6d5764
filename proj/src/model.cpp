#include "psbf/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "psbf/rng.hpp"
#include "psbf/values.hpp"

namespace psbf {
namespace {

void check_params(const PsbParams& p) {
    if (p.d <= 0 || p.k <= 0 || p.m <= 0 || p.n <= 0 || p.N <= 0)
        throw std::invalid_argument("psb: parameters must be positive");
    if (p.k > p.n) throw std::invalid_argument("psb: k must not exceed n");
    if (!(p.coeff_low > 0.0 && p.coeff_low < p.coeff_high))
        throw std::invalid_argument("psb: need 0 < coeff_low < coeff_high");
}

}  // namespace

SparseCodeMatrix sample_X(const PsbParams& params) {
    check_params(params);
    const std::int32_t n = params.n, k = params.k, N = params.N;
    SparseCodeMatrix X(n, N);

    // Reusable buffer: k swaps in, k swaps undone, so each column is an exact
    // uniform draw over k-subsets in O(k).
    std::vector<std::int32_t> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<std::pair<std::int32_t, std::int32_t>> swaps(static_cast<std::size_t>(k));
    std::vector<std::int32_t> picked(static_cast<std::size_t>(k));

    for (std::int32_t c = 0; c < N; ++c) {
        Rng rng(derive_seed(params.seed, std::uint64_t(c)));
        for (std::int32_t t = 0; t < k; ++t) {
            std::int32_t j = t + std::int32_t(rng.below(std::uint64_t(n - t)));
            swaps[std::size_t(t)] = {t, j};
            std::swap(pool[std::size_t(t)], pool[std::size_t(j)]);
            picked[std::size_t(t)] = pool[std::size_t(t)];
        }
        for (std::int32_t t = k - 1; t >= 0; --t)
            std::swap(pool[std::size_t(swaps[std::size_t(t)].first)],
                      pool[std::size_t(swaps[std::size_t(t)].second)]);

        std::sort(picked.begin(), picked.end());
        SparseRealVector& col = X.columns[std::size_t(c)];
        for (std::int32_t row : picked) col.push(row, rng.real(params.coeff_low, params.coeff_high));
    }
    return X;
}

bool verify_dissociated(const SparseRealVector& x, double tol, std::int32_t guard) {
    const std::int32_t s = std::int32_t(x.nnz());
    if (s > guard) throw std::invalid_argument("verify_dissociated: support above enumeration guard");
    if (s == 0) return true;
    const std::size_t total = std::size_t(1) << s;
    std::vector<double> sums(total, 0.0);
    for (std::size_t mask = 1; mask < total; ++mask) {
        std::size_t low = std::size_t(std::countr_zero(mask));
        sums[mask] = sums[mask & (mask - 1)] + x.val[low];
    }
    std::sort(sums.begin(), sums.end());
    for (std::size_t i = 1; i < total; ++i)
        if (sums[i] - sums[i - 1] <= tol) return false;
    return true;
}

PsbInstance sample_instance(const PsbParams& params) {
    check_params(params);
    if (!(params.k < params.m && params.m < params.n))
        throw std::invalid_argument("psb: need k < m < n");
    PsbInstance inst;
    inst.A = generate_encoder({params.m, params.n, params.d, derive_seed(params.seed, 1)});
    PsbParams code = params;
    code.seed = derive_seed(params.seed, 2);
    inst.X = sample_X(code);
    inst.Y = multiply(inst.A, inst.X);
    return inst;
}

std::int64_t sample_size_bound(std::int32_t n, std::int32_t k, std::int32_t d, double epsilon,
                               double mu, double L) {
    if (n <= 0 || k <= 0 || d <= 0 || k > n) throw std::invalid_argument("sample_size_bound: bad dimensions");
    if (!(mu > 1.0) || !(L > 0.0)) throw std::invalid_argument("sample_size_bound: need mu > 1, L > 0");
    const double beta = (1.0 + 2.0 * epsilon) * double(d) * L;
    const double raw = beta * (mu * (double(n) / double(k)) * std::log(double(n)) + 1.0);
    const double snapped = detail::snap(raw);
    return std::int64_t(std::ceil(snapped));
}

}  // namespace psbf
