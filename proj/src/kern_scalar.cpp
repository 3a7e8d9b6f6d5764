#include "psbf/kern.hpp"

#include <bit>
#include <cmath>

namespace psbf::kern {
namespace {

std::uint32_t popcount_and_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t nwords) {
    std::uint32_t c = 0;
    for (std::size_t i = 0; i < nwords; ++i) c += std::uint32_t(std::popcount(a[i] & b[i]));
    return c;
}

double frobenius_sq_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

bool all_within_scaled_tol_scalar(const double* r, const double* ref, std::size_t n,
                                  double tol) {
    for (std::size_t i = 0; i < n; ++i) {
        double bound = tol * std::max(1.0, std::abs(ref[i]));
        if (std::abs(r[i]) > bound) return false;
    }
    return true;
}

}  // namespace

const Ops& scalar() {
    static const Ops ops{"scalar", popcount_and_scalar, frobenius_sq_scalar,
                         all_within_scaled_tol_scalar};
    return ops;
}

}  // namespace psbf::kern
