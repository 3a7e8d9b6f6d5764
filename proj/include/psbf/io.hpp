#pragma once

#include <iosfwd>
#include <string>

#include "psbf/matrix.hpp"

namespace psbf {

// Text exchange format shared by every matrix file: a header line
// "rows cols nnz", then nnz entry lines "row col value" with 0-based indices
// (the value field is omitted for binary matrices). Entries are written
// column-major, rows ascending, values with 17 significant digits so a
// write/read/write cycle is byte-identical.

void write_binary_matrix(std::ostream& os, const BinaryColumnMatrix& A);
void write_sparse_code(std::ostream& os, const SparseCodeMatrix& X);
void write_dense(std::ostream& os, const DenseMatrix& Y);

BinaryColumnMatrix read_binary_matrix(std::istream& is);
SparseCodeMatrix read_sparse_code(std::istream& is);
DenseMatrix read_dense(std::istream& is);

void save_binary_matrix(const std::string& path, const BinaryColumnMatrix& A);
void save_sparse_code(const std::string& path, const SparseCodeMatrix& X);
void save_dense(const std::string& path, const DenseMatrix& Y);

BinaryColumnMatrix load_binary_matrix(const std::string& path);
SparseCodeMatrix load_sparse_code(const std::string& path);
DenseMatrix load_dense(const std::string& path);

}  // namespace psbf
