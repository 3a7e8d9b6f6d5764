#pragma once

#include <cstdint>

#include "psbf/encoder.hpp"
#include "psbf/matrix.hpp"

namespace psbf {

struct PsbParams {
    std::int32_t d = 0, k = 0, m = 0, n = 0, N = 0;
    double coeff_low = 0.1, coeff_high = 10.1;
    std::uint64_t seed = 0;
};

struct PsbInstance {
    BinaryColumnMatrix A;
    SparseCodeMatrix X;
    DenseMatrix Y;
};

/// N independent columns, each with a uniformly chosen k-subset support and
/// i.i.d. uniform coefficients on [coeff_low, coeff_high). Column i draws from
/// derive_seed(params.seed, i), so parallel and serial generation agree.
SparseCodeMatrix sample_X(const PsbParams& params);

/// All subset sums over the support pairwise distinct beyond tol. Enumerates
/// 2^|supp| sums; supports larger than the guard are rejected.
bool verify_dissociated(const SparseRealVector& x, double tol, std::int32_t guard = 14);

/// Encoder and code from independent sub-seeds of the master seed, Y = A*X.
PsbInstance sample_instance(const PsbParams& params);

/// Measurement-count bound beta*(mu*(n/k)*ln(n) + 1) with beta = (1+2*eps)*d*L,
/// rounded up. L is the per-row replication factor, mu > 1 the slack constant;
/// both supplied by the caller.
std::int64_t sample_size_bound(std::int32_t n, std::int32_t k, std::int32_t d, double epsilon,
                               double mu, double L);

}  // namespace psbf
