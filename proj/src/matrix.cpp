#include "mldr/matrix.hpp"

#include <set>
#include <utility>

namespace mldr {

Matrix::Matrix(const Field& f, size_t rows, size_t cols)
    : f_(f), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Matrix Matrix::identity(const Field& f, size_t n) {
  Matrix m(f, n, n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Matrix Matrix::vandermonde(const Field& f, const std::vector<felem>& points, size_t cols) {
  if (cols < 1) throw InvalidParams("vandermonde needs at least one column");
  std::set<felem> seen;
  for (felem p : points) {
    if (p % f.q() == 0) throw InvalidPoints("vandermonde point 0 is not allowed");
    if (!seen.insert(p % f.q()).second) throw InvalidPoints("vandermonde points must be distinct");
  }
  Matrix m(f, points.size(), cols);
  for (size_t r = 0; r < points.size(); ++r) {
    felem acc = 1;
    for (size_t c = 0; c < cols; ++c) {
      m.at(r, c) = acc;
      acc = f.mul(acc, points[r] % f.q());
    }
  }
  return m;
}

Matrix Matrix::mul(const Matrix& rhs) const {
  if (cols_ != rhs.rows_) throw SizeMismatch("matrix product dimension mismatch");
  Matrix out(f_, rows_, rhs.cols_);
  for (size_t i = 0; i < rows_; ++i) {
    for (size_t k = 0; k < cols_; ++k) {
      felem a = at(i, k);
      if (a == 0) continue;
      for (size_t j = 0; j < rhs.cols_; ++j) {
        out.at(i, j) = f_.add(out.at(i, j), f_.mul(a, rhs.at(k, j)));
      }
    }
  }
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(f_, cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  return out;
}

Matrix Matrix::select_rows(const std::vector<size_t>& row_ids) const {
  Matrix out(f_, row_ids.size(), cols_);
  for (size_t i = 0; i < row_ids.size(); ++i) {
    if (row_ids[i] >= rows_) throw SizeMismatch("row selection out of range");
    for (size_t j = 0; j < cols_; ++j) out.at(i, j) = at(row_ids[i], j);
  }
  return out;
}

namespace {

// Gauss-Jordan elimination in place; returns pivot columns. First nonzero
// entry in each column (scanning down from the current row) is the pivot.
// Only the first `pivot_cols` columns are eligible to hold pivots, so an
// augmented right-hand side never masks a singular coefficient block.
std::vector<size_t> eliminate(Matrix& a, size_t pivot_cols) {
  std::vector<size_t> pivots;
  const Field& f = a.field();
  size_t row = 0;
  for (size_t col = 0; col < pivot_cols && row < a.rows(); ++col) {
    size_t pr = row;
    while (pr < a.rows() && a.at(pr, col) == 0) ++pr;
    if (pr == a.rows()) continue;
    if (pr != row) {
      for (size_t j = 0; j < a.cols(); ++j) std::swap(a.at(pr, j), a.at(row, j));
    }
    felem scale = f.inv(a.at(row, col));
    for (size_t j = 0; j < a.cols(); ++j) a.at(row, j) = f.mul(a.at(row, j), scale);
    for (size_t r = 0; r < a.rows(); ++r) {
      if (r == row || a.at(r, col) == 0) continue;
      felem factor = a.at(r, col);
      for (size_t j = 0; j < a.cols(); ++j) {
        a.at(r, j) = f.sub(a.at(r, j), f.mul(factor, a.at(row, j)));
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

size_t Matrix::rank() const {
  Matrix work = *this;
  return eliminate(work, cols_).size();
}

Matrix Matrix::solve(const Matrix& rhs) const {
  if (rows_ != cols_) throw SizeMismatch("solve requires a square system");
  if (rhs.rows_ != rows_) throw SizeMismatch("right-hand side row count mismatch");
  Matrix aug(f_, rows_, cols_ + rhs.cols_);
  for (size_t i = 0; i < rows_; ++i) {
    for (size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    for (size_t j = 0; j < rhs.cols_; ++j) aug.at(i, cols_ + j) = rhs.at(i, j);
  }
  std::vector<size_t> pivots = eliminate(aug, cols_);
  if (pivots.size() != cols_) throw SingularMatrix("singular system");
  Matrix out(f_, cols_, rhs.cols_);
  for (size_t i = 0; i < cols_; ++i)
    for (size_t j = 0; j < rhs.cols_; ++j) out.at(i, j) = aug.at(i, cols_ + j);
  return out;
}

Matrix Matrix::invert() const {
  return solve(identity(f_, rows_));
}

}  // namespace mldr
