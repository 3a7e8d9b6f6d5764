// AVX2 variants. This translation unit is compiled with -mavx2 -mpopcnt and
// only entered after a runtime cpuid check in kern_dispatch.cpp.
#include "psbf/kern.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <bit>
#include <cmath>

namespace psbf::kern {
namespace {

std::uint32_t popcount_and_avx2(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t nwords) {
    std::uint64_t c0 = 0, c1 = 0, c2 = 0, c3 = 0;
    std::size_t i = 0;
    alignas(32) std::uint64_t lane[4];
    for (; i + 4 <= nwords; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        _mm256_store_si256(reinterpret_cast<__m256i*>(lane), _mm256_and_si256(va, vb));
        c0 += std::uint64_t(std::popcount(lane[0]));
        c1 += std::uint64_t(std::popcount(lane[1]));
        c2 += std::uint64_t(std::popcount(lane[2]));
        c3 += std::uint64_t(std::popcount(lane[3]));
    }
    for (; i < nwords; ++i) c0 += std::uint64_t(std::popcount(a[i] & b[i]));
    return std::uint32_t(c0 + c1 + c2 + c3);
}

double frobenius_sq_avx2(const double* x, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d v0 = _mm256_loadu_pd(x + i);
        __m256d v1 = _mm256_loadu_pd(x + i + 4);
        acc0 = _mm256_fmadd_pd(v0, v0, acc0);
        acc1 = _mm256_fmadd_pd(v1, v1, acc1);
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, _mm256_add_pd(acc0, acc1));
    double acc = lane[0] + lane[1] + lane[2] + lane[3];
    for (; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

bool all_within_scaled_tol_avx2(const double* r, const double* ref, std::size_t n,
                                double tol) {
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    const __m256d ones = _mm256_set1_pd(1.0);
    const __m256d vtol = _mm256_set1_pd(tol);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vr = _mm256_and_pd(_mm256_loadu_pd(r + i), abs_mask);
        __m256d vref = _mm256_and_pd(_mm256_loadu_pd(ref + i), abs_mask);
        __m256d bound = _mm256_mul_pd(vtol, _mm256_max_pd(ones, vref));
        __m256d bad = _mm256_cmp_pd(vr, bound, _CMP_GT_OQ);
        if (_mm256_movemask_pd(bad) != 0) return false;
    }
    for (; i < n; ++i) {
        if (std::abs(r[i]) > tol * std::max(1.0, std::abs(ref[i]))) return false;
    }
    return true;
}

}  // namespace

const Ops* avx2_ops() {
    static const Ops ops{"avx2", popcount_and_avx2, frobenius_sq_avx2,
                         all_within_scaled_tol_avx2};
    return &ops;
}

}  // namespace psbf::kern

#else

namespace psbf::kern {
const Ops* avx2_ops() { return nullptr; }
}  // namespace psbf::kern

#endif
