// Micro-benchmark for the leaf kernels across the available backends.
// Self-timed; prints ns/op and effective throughput for the shapes the
// factorisation drivers actually use.
#include <chrono>
#include <cstdio>
#include <vector>

#include "psbf/kern.hpp"
#include "psbf/rng.hpp"

using namespace psbf;

namespace {

using Clock = std::chrono::steady_clock;

template <typename Fn>
double time_ns(std::int64_t iters, Fn&& fn) {
    const auto t0 = Clock::now();
    for (std::int64_t i = 0; i < iters; ++i) fn(i);
    const auto dt = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0);
    return double(dt.count()) / double(iters);
}

volatile double sink_d;
volatile std::uint64_t sink_u;

}  // namespace

int main() {
    Rng rng(1);

    // Bitset overlap at the mask widths the clustering sees: m=160 -> 3
    // words, m=800 -> 13 words.
    for (std::size_t nwords : {3u, 13u, 64u}) {
        std::vector<std::uint64_t> a(nwords), b(nwords);
        for (auto& w : a) w = rng.next();
        for (auto& w : b) w = rng.next();
        std::printf("popcount_and %3zu words:", nwords);
        for (const kern::Ops* ops : kern::available()) {
            const double ns = time_ns(2'000'000, [&](std::int64_t) {
                sink_u = ops->popcount_and(a.data(), b.data(), nwords);
            });
            std::printf("  %s %.1f ns", ops->name, ns);
        }
        std::printf("\n");
    }

    // Dense reductions at residual-matrix sizes (m*N doubles).
    for (std::size_t n : {128u * 1024u, 1024u * 1024u}) {
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = rng.real(-100.0, 100.0);
            // Inside the tolerance band so the scan runs to the end.
            x[i] = y[i] * 1e-11;
        }
        std::printf("frobenius_sq %7zu:", n);
        for (const kern::Ops* ops : kern::available()) {
            const double ns = time_ns(200, [&](std::int64_t) {
                sink_d = ops->frobenius_sq(x.data(), n);
            });
            std::printf("  %s %.2f GB/s", ops->name, double(n * 8) / ns);
        }
        std::printf("\n");
        std::printf("zero_check   %7zu:", n);
        for (const kern::Ops* ops : kern::available()) {
            const double ns = time_ns(200, [&](std::int64_t) {
                sink_u = ops->all_within_scaled_tol(x.data(), y.data(), n, 1e-9) ? 1 : 0;
            });
            std::printf("  %s %.2f GB/s", ops->name, double(n * 16) / ns);
        }
        std::printf("\n");
    }
    return 0;
}
