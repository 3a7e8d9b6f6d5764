#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "psbf/kern.hpp"

namespace psbf {

/// Binary vector packed into 64-bit words, for fast support intersections.
struct PackedBits {
    std::int32_t nbits = 0;
    std::vector<std::uint64_t> words;

    PackedBits() = default;
    explicit PackedBits(std::int32_t bits) : nbits(bits), words((std::size_t(bits) + 63) / 64, 0) {}

    static PackedBits from_sorted(std::span<const std::int32_t> rows, std::int32_t bits) {
        PackedBits p(bits);
        for (std::int32_t r : rows) p.words[std::size_t(r) >> 6] |= std::uint64_t(1) << (r & 63);
        return p;
    }

    void set(std::int32_t i) { words[std::size_t(i) >> 6] |= std::uint64_t(1) << (i & 63); }
    bool test(std::int32_t i) const {
        return (words[std::size_t(i) >> 6] >> (i & 63)) & 1;
    }
    std::int32_t popcount() const;
};

inline std::int32_t overlap(const PackedBits& a, const PackedBits& b) {
    return std::int32_t(kern::active().popcount_and(a.words.data(), b.words.data(), a.words.size()));
}

/// Real vector stored as sorted (index, value) pairs. No stored value is
/// exactly zero and indices are strictly increasing.
struct SparseRealVector {
    std::int32_t dim = 0;
    std::vector<std::int32_t> idx;
    std::vector<double> val;

    SparseRealVector() = default;
    explicit SparseRealVector(std::int32_t n) : dim(n) {}

    std::size_t nnz() const { return idx.size(); }
    void push(std::int32_t i, double v) {
        idx.push_back(i);
        val.push_back(v);
    }
    bool invariants_ok() const;
};

/// n x N real matrix stored as one SparseRealVector per column.
struct SparseCodeMatrix {
    std::int32_t rows = 0, cols = 0;
    std::vector<SparseRealVector> columns;

    SparseCodeMatrix() = default;
    SparseCodeMatrix(std::int32_t n, std::int32_t N)
        : rows(n), cols(N), columns(std::size_t(N), SparseRealVector(n)) {}

    std::size_t nnz() const;
};

/// m x n binary matrix stored as per-column sorted support lists.
struct BinaryColumnMatrix {
    std::int32_t rows = 0, cols = 0;
    std::vector<std::vector<std::int32_t>> supports;

    BinaryColumnMatrix() = default;
    BinaryColumnMatrix(std::int32_t m, std::int32_t n)
        : rows(m), cols(n), supports(std::size_t(n)) {}

    std::int32_t degree(std::int32_t l) const { return std::int32_t(supports[std::size_t(l)].size()); }
    std::span<const std::int32_t> support(std::int32_t l) const { return supports[std::size_t(l)]; }
    std::size_t nnz() const;
    bool invariants_ok() const;
    bool columns_equal(const BinaryColumnMatrix& other) const {
        return rows == other.rows && supports == other.supports;
    }
};

/// Column-major dense matrix; holds Y and the residual R.
struct DenseMatrix {
    std::int32_t rows = 0, cols = 0;
    std::vector<double> data;

    DenseMatrix() = default;
    DenseMatrix(std::int32_t m, std::int32_t n)
        : rows(m), cols(n), data(std::size_t(m) * std::size_t(n), 0.0) {}

    double* col(std::int32_t i) { return data.data() + std::size_t(i) * rows; }
    const double* col(std::int32_t i) const { return data.data() + std::size_t(i) * rows; }
    double& at(std::int32_t r, std::int32_t c) { return data[std::size_t(c) * rows + r]; }
    double at(std::int32_t r, std::int32_t c) const { return data[std::size_t(c) * rows + r]; }
    double frobenius() const;
};

/// |supp(w1) ^ supp(w2)| by sorted-list merge.
std::int32_t inner_product(std::span<const std::int32_t> w1, std::span<const std::int32_t> w2);

/// Y - Ahat * Xhat, column by column through the support lists.
DenseMatrix residual(const DenseMatrix& Y, const BinaryColumnMatrix& Ahat,
                     const SparseCodeMatrix& Xhat);

/// One column of the above into a caller buffer: r = y - Ahat * xcol.
void residual_column(std::span<const double> y, const BinaryColumnMatrix& Ahat,
                     const SparseRealVector& xcol, std::span<double> r);

/// A * X as a dense matrix.
DenseMatrix multiply(const BinaryColumnMatrix& A, const SparseCodeMatrix& X);

/// Entries of r with |r_j| <= tol*max(1,|ref_j|) are treated as zero and dropped.
SparseRealVector sparsify(std::span<const double> r, std::span<const double> ref, double tol);

}  // namespace psbf
