#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace stpc {

// Dense real matrix, row-major storage. Indices are zero-based.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  // Rejects NaN / Inf entries and size mismatches.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix zeros(std::size_t rows, std::size_t cols) {
    return Matrix(rows, cols);
  }
  static Matrix identity(std::size_t n);
  static Matrix ones(std::size_t rows, std::size_t cols);
  static Matrix column(std::span<const double> values);
  static Matrix row(std::span<const double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::span<double> row_span(std::size_t r) {
    return std::span<double>(data_).subspan(r * cols_, cols_);
  }
  std::span<const double> row_span(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * cols_, cols_);
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr,
               std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
  Matrix transpose() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s);

  bool operator==(const Matrix& o) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);

// Ordinary product; throws DimensionMismatch when cols(a) != rows(b).
Matrix operator*(const Matrix& a, const Matrix& b);
// aᵀ·b without materialising the transpose.
Matrix transpose_times(const Matrix& a, const Matrix& b);

double max_abs(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);
// (a + aᵀ) / 2
Matrix symmetrized(const Matrix& a);
// ½·xᵀ·k·x for a column x.
double half_quadratic_form(const Matrix& k, std::span<const double> x);

// δ_dim^index. `index` is one-based.
struct CanonicalVector {
  std::size_t dim = 1;
  std::size_t index = 1;

  CanonicalVector() = default;
  CanonicalVector(std::size_t dim, std::size_t index);

  Matrix dense() const;
  bool operator==(const CanonicalVector&) const = default;
};

// Matrix whose every column is a canonical basis vector, stored by the
// one-based row index of the 1 in each column.
class LogicalMatrix {
 public:
  LogicalMatrix() = default;
  LogicalMatrix(std::size_t rows, std::vector<std::size_t> col_indices);

  static LogicalMatrix identity(std::size_t n);
  static LogicalMatrix from_vector(const CanonicalVector& v) {
    return LogicalMatrix(v.dim, {v.index});
  }
  // Accepts only 0/1 matrices with exactly one 1 per column.
  static LogicalMatrix from_dense(const Matrix& m);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_.size(); }
  // One-based row index of column j (j zero-based).
  std::size_t index(std::size_t j) const { return cols_[j]; }
  const std::vector<std::size_t>& col_indices() const { return cols_; }

  Matrix dense() const;
  // Column j as a canonical vector.
  CanonicalVector column(std::size_t j) const {
    return CanonicalVector(rows_, cols_[j]);
  }

  bool operator==(const LogicalMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::vector<std::size_t> cols_;
};

// Horizontal concatenation [a b ...]; all operands share a row count.
LogicalMatrix hconcat(std::span<const LogicalMatrix> parts);

// m · logical (column gather).
Matrix operator*(const Matrix& m, const LogicalMatrix& l);
// logical · m (row scatter-add).
Matrix operator*(const LogicalMatrix& l, const Matrix& m);

}  // namespace stpc
