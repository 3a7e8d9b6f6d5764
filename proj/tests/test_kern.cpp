#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "psbf/kern.hpp"
#include "psbf/matrix.hpp"
#include "psbf/rng.hpp"

using namespace psbf;

TEST_CASE("every kernel backend agrees with the scalar reference") {
    const auto backends = kern::available();
    REQUIRE(backends.size() >= 1);
    const kern::Ops& ref = kern::scalar();
    Rng rng(42);

    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t nwords = 1 + rng.below(40);
        std::vector<std::uint64_t> a(nwords), b(nwords);
        for (auto& w : a) w = rng.next();
        for (auto& w : b) w = rng.next();

        const std::size_t n = 1 + rng.below(513);
        std::vector<double> x(n), y(n);
        for (auto& v : x) v = rng.real(-100.0, 100.0);
        for (auto& v : y) v = rng.real(-100.0, 100.0);
        // Plant near-boundary entries so the tolerance test path is exercised.
        if (n > 3) {
            x[1] = 1e-12;
            x[2] = 0.0;
            x[3] = y[3] * 1e-9;
        }

        const double tol = 1e-9;
        for (const kern::Ops* ops : backends) {
            CHECK(ops->popcount_and(a.data(), b.data(), nwords) ==
                  ref.popcount_and(a.data(), b.data(), nwords));
            CHECK(ops->all_within_scaled_tol(x.data(), y.data(), n, tol) ==
                  ref.all_within_scaled_tol(x.data(), y.data(), n, tol));
            const double got = ops->frobenius_sq(x.data(), n);
            const double want = ref.frobenius_sq(x.data(), n);
            CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, want));
        }
    }
}

TEST_CASE("packed overlap equals the sorted-merge inner product") {
    Rng rng(7);
    const std::int32_t m = 700;
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::int32_t> r1, r2;
        for (std::int32_t i = 0; i < m; ++i) {
            if (rng.below(10) == 0) r1.push_back(i);
            if (rng.below(10) == 0) r2.push_back(i);
        }
        PackedBits b1 = PackedBits::from_sorted(r1, m);
        PackedBits b2 = PackedBits::from_sorted(r2, m);
        CHECK(overlap(b1, b2) == inner_product(r1, r2));
    }
}

TEST_CASE("inner product examples") {
    std::vector<std::int32_t> a{1, 2, 3}, b{1, 2, 3};
    CHECK(inner_product(a, b) == 3);
    std::vector<std::int32_t> c{0, 4}, d{1, 5};
    CHECK(inner_product(c, d) == 0);
    std::vector<std::int32_t> e{0, 2, 4}, f{2, 4, 8};
    CHECK(inner_product(e, f) == 2);
}

TEST_CASE("zero-length inputs") {
    const kern::Ops& ops = kern::active();
    CHECK(ops.popcount_and(nullptr, nullptr, 0) == 0);
    CHECK(ops.frobenius_sq(nullptr, 0) == 0.0);
    CHECK(ops.all_within_scaled_tol(nullptr, nullptr, 0, 1e-9));
}
