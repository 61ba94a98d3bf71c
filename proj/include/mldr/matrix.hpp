#pragma once

#include <cstddef>
#include <vector>

#include "mldr/field.hpp"

namespace mldr {

// Dense matrix over a prime field, row-major. Elimination uses deterministic
// first-nonzero pivot selection: arithmetic is exact, so no pivoting
// heuristics are needed and results are reproducible across builds.
class Matrix {
 public:
  Matrix(const Field& f, size_t rows, size_t cols);

  static Matrix identity(const Field& f, size_t n);

  // Row i is (p_i^0, p_i^1, ..., p_i^{cols-1}). Points must be pairwise
  // distinct and nonzero so that any `cols` rows form an invertible square
  // submatrix.
  static Matrix vandermonde(const Field& f, const std::vector<felem>& points, size_t cols);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  const Field& field() const { return f_; }

  felem& at(size_t r, size_t c) { return data_[r * cols_ + c]; }
  felem at(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  Matrix mul(const Matrix& rhs) const;
  Matrix transpose() const;
  Matrix select_rows(const std::vector<size_t>& row_ids) const;

  size_t rank() const;
  Matrix invert() const;             // throws SingularMatrix
  Matrix solve(const Matrix& rhs) const;  // solves A X = rhs for square A

  bool operator==(const Matrix&) const = default;

 private:
  Field f_;
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<felem> data_;
};

}  // namespace mldr
