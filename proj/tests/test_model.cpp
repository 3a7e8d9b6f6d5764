#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cmath>

#include "oracles.hpp"
#include "psbf/model.hpp"
#include "psbf/rng.hpp"

using namespace psbf;

TEST_CASE("sampled columns have exactly k values in range") {
    PsbParams p{2, 2, 6, 8, 3, 0.1, 10.1, 17};
    SparseCodeMatrix X = sample_X(p);
    REQUIRE(X.cols == 3);
    for (const auto& col : X.columns) {
        CHECK(col.nnz() == 2);
        CHECK(col.invariants_ok());
        for (double v : col.val) {
            CHECK(v >= 0.1);
            CHECK(v < 10.1);
        }
    }

    PsbParams dense = p;
    dense.k = dense.n;
    for (const auto& col : sample_X(dense).columns) CHECK(col.nnz() == std::size_t(dense.n));

    PsbParams bad = p;
    bad.k = bad.n + 1;
    CHECK_THROWS_AS(sample_X(bad), std::invalid_argument);
}

TEST_CASE("sampling is deterministic in the seed, per column") {
    PsbParams p{2, 3, 8, 10, 6, 0.1, 10.1, 555};
    SparseCodeMatrix a = sample_X(p);
    SparseCodeMatrix b = sample_X(p);
    for (std::int32_t c = 0; c < p.N; ++c) {
        CHECK(a.columns[std::size_t(c)].idx == b.columns[std::size_t(c)].idx);
        CHECK(a.columns[std::size_t(c)].val == b.columns[std::size_t(c)].val);
    }
    // A prefix of the columns is unchanged by asking for fewer of them.
    PsbParams shorter = p;
    shorter.N = 3;
    SparseCodeMatrix c = sample_X(shorter);
    for (std::int32_t i = 0; i < 3; ++i)
        CHECK(a.columns[std::size_t(i)].idx == c.columns[std::size_t(i)].idx);
}

TEST_CASE("support inclusion frequency matches k/n within binomial bounds") {
    PsbParams p{2, 3, 8, 10, 100000, 0.1, 10.1, 911};
    SparseCodeMatrix X = sample_X(p);
    std::int64_t hits = 0;
    for (const auto& col : X.columns)
        if (std::binary_search(col.idx.begin(), col.idx.end(), 0)) ++hits;
    const double prob = double(p.k) / double(p.n);
    const double mean = double(p.N) * prob;
    const double sigma = std::sqrt(double(p.N) * prob * (1.0 - prob));
    CHECK(std::abs(double(hits) - mean) <= 3.0 * sigma);
}

TEST_CASE("dissociated vectors: binary weights yes, colliding sums no") {
    CHECK(verify_dissociated(oracle::make_sparse(5, {{0, 1.0}, {1, 2.0}, {3, 4.0}}), 1e-9));
    CHECK(!verify_dissociated(oracle::make_sparse(5, {{0, 1.0}, {1, 2.0}, {3, 3.0}}), 1e-9));
    CHECK(verify_dissociated(SparseRealVector(4), 1e-9));

    SparseRealVector wide(20);
    for (std::int32_t i = 0; i < 15; ++i) wide.push(i, 1.0 + i);
    CHECK_THROWS_AS(verify_dissociated(wide, 1e-9), std::invalid_argument);
}

TEST_CASE("dissociation agrees with the signed-combination oracle") {
    Rng rng(2718);
    int agree_false = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::int32_t dim = 6;
        const std::int32_t s = 1 + std::int32_t(rng.below(4));
        std::vector<std::pair<std::int32_t, double>> entries;
        for (std::int32_t i = 0; i < s; ++i)
            entries.emplace_back(i, double(1 + rng.below(8)) * 0.5);  // collisions likely
        SparseRealVector x = oracle::make_sparse(dim, entries);
        const bool got = verify_dissociated(x, 1e-9);
        const bool want = oracle::dissociated(x, 1e-9);
        CHECK(got == want);
        if (!want) ++agree_false;
    }
    CHECK(agree_false > 0);  // the discrete values do produce collisions
}

TEST_CASE("sampled columns are dissociated in every trial") {
    Rng rng(31415);
    for (int trial = 0; trial < 10000; ++trial) {
        PsbParams p{2, 10, 40, 64, 1, 0.1, 10.1, rng.next()};
        SparseCodeMatrix X = sample_X(p);
        CHECK(verify_dissociated(X.columns[0], 1e-9));
    }
}

TEST_CASE("hand product on the disjoint encoder: one value, d copies") {
    BinaryColumnMatrix A = generate_encoder({6, 3, 2, 62});
    SparseCodeMatrix X(3, 1);
    X.columns[0] = oracle::make_sparse(3, {{0, 5.0}});
    DenseMatrix Y = multiply(A, X);
    int fives = 0, zeros = 0;
    for (std::int32_t r = 0; r < 6; ++r) {
        if (Y.at(r, 0) == 5.0) ++fives;
        if (Y.at(r, 0) == 0.0) ++zeros;
    }
    CHECK(fives == 2);
    CHECK(zeros == 4);
}

TEST_CASE("instance composes independently seeded encoder and code") {
    PsbParams p{3, 2, 10, 16, 5, 0.1, 10.1, 404};
    PsbInstance inst = sample_instance(p);
    BinaryColumnMatrix A = generate_encoder({p.m, p.n, p.d, derive_seed(p.seed, 1)});
    PsbParams code = p;
    code.seed = derive_seed(p.seed, 2);
    SparseCodeMatrix X = sample_X(code);
    CHECK(inst.A.columns_equal(A));
    CHECK(inst.X.nnz() == X.nnz());
    for (std::int32_t c = 0; c < p.N; ++c) {
        CHECK(inst.X.columns[std::size_t(c)].idx == X.columns[std::size_t(c)].idx);
        CHECK(inst.X.columns[std::size_t(c)].val == X.columns[std::size_t(c)].val);
        CHECK(inst.X.columns[std::size_t(c)].nnz() == std::size_t(p.k));
    }
    DenseMatrix Y = multiply(A, X);
    CHECK(Y.data == inst.Y.data);
}

TEST_CASE("experiment-scale instance builds quickly") {
    const auto t0 = std::chrono::steady_clock::now();
    PsbParams p{10, 50, 800, 1000, 300, 0.1, 10.1, 3};
    PsbInstance inst = sample_instance(p);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    CHECK(inst.Y.cols == 300);
    CHECK(ms < 1000);
}

TEST_CASE("instance parameter validation") {
    PsbParams p{2, 5, 4, 8, 3, 0.1, 10.1, 0};  // k >= m
    CHECK_THROWS_AS(sample_instance(p), std::invalid_argument);
    PsbParams q{2, 2, 9, 8, 3, 0.1, 10.1, 0};  // m >= n
    CHECK_THROWS_AS(sample_instance(q), std::invalid_argument);
}

TEST_CASE("sample size bound arithmetic") {
    // beta = 1 via (1+2*0)*1*1, mu = 2: ceil(2*10*ln(100) + 1) = 94.
    CHECK(sample_size_bound(100, 10, 1, 0.0, 2.0, 1.0) == 94);
    // The exact-recovery suite configuration.
    CHECK(sample_size_bound(200, 10, 10, 1.0 / 6.0, 2.0, 3.0) == 8518);
    // Monotonicity in mu and the superlinear growth in n.
    CHECK(sample_size_bound(100, 10, 1, 0.0, 1.5, 1.0) <
          sample_size_bound(100, 10, 1, 0.0, 2.0, 1.0));
    CHECK(sample_size_bound(200, 10, 1, 0.0, 2.0, 1.0) >
          2 * sample_size_bound(100, 10, 1, 0.0, 2.0, 1.0));
    CHECK_THROWS_AS(sample_size_bound(100, 10, 1, 0.0, 1.0, 1.0), std::invalid_argument);
}
