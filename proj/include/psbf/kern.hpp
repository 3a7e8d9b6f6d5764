#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace psbf::kern {

// Leaf kernels behind the sparse peeling layers. Each has a scalar reference
// implementation and, where the host CPU supports it, a SIMD variant chosen
// once at startup. All variants are interchangeable: popcount_and and
// all_within_scaled_tol are bit-exact, frobenius_sq may differ by summation
// order only.
struct Ops {
    const char* name;
    // |a & b| over nwords 64-bit words.
    std::uint32_t (*popcount_and)(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t nwords);
    // sum of squares.
    double (*frobenius_sq)(const double* x, std::size_t n);
    // true iff |r[i]| <= tol * max(1, |ref[i]|) for all i.
    bool (*all_within_scaled_tol)(const double* r, const double* ref, std::size_t n,
                                  double tol);
};

const Ops& scalar();

// Selected implementation. Honours PSB_FACTOR_SIMD=scalar|avx2|auto (default
// auto). Resolved once; subsequent calls are a load.
const Ops& active();

// Every implementation usable on this machine, scalar first.
std::vector<const Ops*> available();

}  // namespace psbf::kern
