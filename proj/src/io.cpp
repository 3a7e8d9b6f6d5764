#include "psbf/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace psbf {
namespace {

void fail(const std::string& what) { throw std::runtime_error("exchange format: " + what); }

struct Header {
    std::int32_t rows, cols;
    std::int64_t nnz;
};

Header read_header(std::istream& is) {
    Header h{};
    if (!(is >> h.rows >> h.cols >> h.nnz)) fail("bad header");
    if (h.rows <= 0 || h.cols <= 0 || h.nnz < 0) fail("bad dimensions");
    return h;
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_binary_matrix(std::ostream& os, const BinaryColumnMatrix& A) {
    os << A.rows << ' ' << A.cols << ' ' << A.nnz() << '\n';
    for (std::int32_t l = 0; l < A.cols; ++l)
        for (std::int32_t r : A.support(l)) os << r << ' ' << l << '\n';
}

void write_sparse_code(std::ostream& os, const SparseCodeMatrix& X) {
    os << X.rows << ' ' << X.cols << ' ' << X.nnz() << '\n';
    for (std::int32_t c = 0; c < X.cols; ++c) {
        const SparseRealVector& col = X.columns[std::size_t(c)];
        for (std::size_t e = 0; e < col.nnz(); ++e)
            os << col.idx[e] << ' ' << c << ' ' << format_value(col.val[e]) << '\n';
    }
}

void write_dense(std::ostream& os, const DenseMatrix& Y) {
    std::int64_t nnz = 0;
    for (double v : Y.data)
        if (v != 0.0) ++nnz;
    os << Y.rows << ' ' << Y.cols << ' ' << nnz << '\n';
    for (std::int32_t c = 0; c < Y.cols; ++c)
        for (std::int32_t r = 0; r < Y.rows; ++r) {
            double v = Y.at(r, c);
            if (v != 0.0) os << r << ' ' << c << ' ' << format_value(v) << '\n';
        }
}

BinaryColumnMatrix read_binary_matrix(std::istream& is) {
    Header h = read_header(is);
    BinaryColumnMatrix A(h.rows, h.cols);
    for (std::int64_t e = 0; e < h.nnz; ++e) {
        std::int32_t r, c;
        if (!(is >> r >> c)) fail("truncated entry list");
        if (r < 0 || r >= h.rows || c < 0 || c >= h.cols) fail("entry out of range");
        A.supports[std::size_t(c)].push_back(r);
    }
    for (auto& s : A.supports) {
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end()) fail("duplicate entry");
    }
    return A;
}

SparseCodeMatrix read_sparse_code(std::istream& is) {
    Header h = read_header(is);
    SparseCodeMatrix X(h.rows, h.cols);
    std::vector<std::vector<std::pair<std::int32_t, double>>> cols(std::size_t(h.cols));
    for (std::int64_t e = 0; e < h.nnz; ++e) {
        std::int32_t r, c;
        double v;
        if (!(is >> r >> c >> v)) fail("truncated entry list");
        if (r < 0 || r >= h.rows || c < 0 || c >= h.cols) fail("entry out of range");
        if (v == 0.0) fail("stored zero value");
        cols[std::size_t(c)].emplace_back(r, v);
    }
    for (std::int32_t c = 0; c < h.cols; ++c) {
        auto& entries = cols[std::size_t(c)];
        std::sort(entries.begin(), entries.end());
        SparseRealVector& col = X.columns[std::size_t(c)];
        for (auto& [r, v] : entries) {
            if (!col.idx.empty() && col.idx.back() == r) fail("duplicate entry");
            col.push(r, v);
        }
    }
    return X;
}

DenseMatrix read_dense(std::istream& is) {
    Header h = read_header(is);
    DenseMatrix Y(h.rows, h.cols);
    for (std::int64_t e = 0; e < h.nnz; ++e) {
        std::int32_t r, c;
        double v;
        if (!(is >> r >> c >> v)) fail("truncated entry list");
        if (r < 0 || r >= h.rows || c < 0 || c >= h.cols) fail("entry out of range");
        Y.at(r, c) = v;
    }
    return Y;
}

namespace {
template <typename T, typename W>
void save_impl(const std::string& path, const T& m, W writer) {
    std::ofstream os(path);
    if (!os) fail("cannot open " + path + " for writing");
    writer(os, m);
    if (!os) fail("write failed: " + path);
}
template <typename R>
auto load_impl(const std::string& path, R reader) {
    std::ifstream is(path);
    if (!is) fail("cannot open " + path);
    return reader(is);
}
}  // namespace

void save_binary_matrix(const std::string& path, const BinaryColumnMatrix& A) {
    save_impl(path, A, [](std::ostream& os, const BinaryColumnMatrix& m) { write_binary_matrix(os, m); });
}
void save_sparse_code(const std::string& path, const SparseCodeMatrix& X) {
    save_impl(path, X, [](std::ostream& os, const SparseCodeMatrix& m) { write_sparse_code(os, m); });
}
void save_dense(const std::string& path, const DenseMatrix& Y) {
    save_impl(path, Y, [](std::ostream& os, const DenseMatrix& m) { write_dense(os, m); });
}
BinaryColumnMatrix load_binary_matrix(const std::string& path) {
    return load_impl(path, [](std::istream& is) { return read_binary_matrix(is); });
}
SparseCodeMatrix load_sparse_code(const std::string& path) {
    return load_impl(path, [](std::istream& is) { return read_sparse_code(is); });
}
DenseMatrix load_dense(const std::string& path) {
    return load_impl(path, [](std::istream& is) { return read_dense(is); });
}

}  // namespace psbf
