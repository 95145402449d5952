#include "stpc/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stpc/error.hpp"
#include "stpc/simd/kernels.hpp"

namespace stpc {

namespace {

std::string dims(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch(std::string(op) + ": " + dims(a.rows(), a.cols()) +
                            " vs " + dims(b.rows(), b.cols()));
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionMismatch("matrix data has " + std::to_string(data_.size()) +
                            " entries, expected " + dims(rows_, cols_));
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw NonFiniteValue("matrix entry is not finite");
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch("ragged matrix literal");
    for (double v : r) {
      if (!std::isfinite(v)) throw NonFiniteValue("matrix entry is not finite");
      data_.push_back(v);
    }
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::ones(std::size_t rows, std::size_t cols) {
  return Matrix(rows, cols, std::vector<double>(rows * cols, 1.0));
}

Matrix Matrix::column(std::span<const double> values) {
  return Matrix(values.size(), 1,
                std::vector<double>(values.begin(), values.end()));
}

Matrix Matrix::row(std::span<const double> values) {
  return Matrix(1, values.size(),
                std::vector<double>(values.begin(), values.end()));
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                     std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) {
    throw DimensionMismatch("block " + dims(nr, nc) + " at (" +
                            std::to_string(r0) + "," + std::to_string(c0) +
                            ") exceeds " + dims(rows_, cols_));
  }
  Matrix out(nr, nc);
  for (std::size_t i = 0; i < nr; ++i) {
    const double* src = data_.data() + (r0 + i) * cols_ + c0;
    std::copy(src, src + nc, out.data_.data() + i * nc);
  }
  return out;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) {
    throw DimensionMismatch("set_block " + dims(b.rows_, b.cols_) +
                            " exceeds " + dims(rows_, cols_));
  }
  for (std::size_t i = 0; i < b.rows_; ++i) {
    std::copy(b.data_.data() + i * b.cols_, b.data_.data() + (i + 1) * b.cols_,
              data_.data() + (r0 + i) * cols_ + c0);
  }
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  require_same_shape(*this, o, "add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  require_same_shape(*this, o, "subtract");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("product " + dims(a.rows(), a.cols()) + " * " +
                            dims(b.rows(), b.cols()));
  }
  Matrix c(a.rows(), b.cols());
  if (c.empty()) return c;
  simd::active_kernels().gemm(a.rows(), b.cols(), a.cols(), a.data().data(),
                              b.data().data(), c.data().data());
  return c;
}

Matrix transpose_times(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionMismatch("transpose product " + dims(a.rows(), a.cols()) +
                            "^T * " + dims(b.rows(), b.cols()));
  }
  Matrix c(a.cols(), b.cols());
  if (c.empty()) return c;
  simd::active_kernels().gemm_tn(a.cols(), b.cols(), a.rows(),
                                 a.data().data(), b.data().data(),
                                 c.data().data());
  return c;
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  }
  return m;
}

Matrix symmetrized(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("symmetrize non-square");
  Matrix s(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      s(i, j) = 0.5 * (a(i, j) + a(j, i));
    }
  }
  return s;
}

double half_quadratic_form(const Matrix& k, std::span<const double> x) {
  if (k.rows() != x.size() || k.cols() != x.size()) {
    throw DimensionMismatch("quadratic form " + dims(k.rows(), k.cols()) +
                            " with vector of length " +
                            std::to_string(x.size()));
  }
  const auto& kern = simd::active_kernels();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) continue;
    s += x[i] * kern.dot(k.row_span(i).data(), x.data(), x.size());
  }
  return 0.5 * s;
}

CanonicalVector::CanonicalVector(std::size_t dim_, std::size_t index_)
    : dim(dim_), index(index_) {
  if (dim == 0 || index < 1 || index > dim) {
    throw DimensionMismatch("canonical vector index " + std::to_string(index) +
                            " outside [1, " + std::to_string(dim) + "]");
  }
}

Matrix CanonicalVector::dense() const {
  Matrix v(dim, 1);
  v(index - 1, 0) = 1.0;
  return v;
}

LogicalMatrix::LogicalMatrix(std::size_t rows, std::vector<std::size_t> cols)
    : rows_(rows), cols_(std::move(cols)) {
  if (rows_ == 0) throw DimensionMismatch("logical matrix with zero rows");
  for (std::size_t idx : cols_) {
    if (idx < 1 || idx > rows_) {
      throw DimensionMismatch("logical column index " + std::to_string(idx) +
                              " outside [1, " + std::to_string(rows_) + "]");
    }
  }
}

LogicalMatrix LogicalMatrix::identity(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i + 1;
  return LogicalMatrix(n, std::move(idx));
}

LogicalMatrix LogicalMatrix::from_dense(const Matrix& m) {
  std::vector<std::size_t> idx(m.cols(), 0);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const double v = m(i, j);
      if (v == 1.0) {
        if (idx[j] != 0) {
          throw DimensionMismatch("column " + std::to_string(j + 1) +
                                  " has more than one nonzero");
        }
        idx[j] = i + 1;
      } else if (v != 0.0) {
        throw DimensionMismatch("logical matrix entries must be 0 or 1");
      }
    }
    if (idx[j] == 0) {
      throw DimensionMismatch("column " + std::to_string(j + 1) +
                              " is not a canonical vector");
    }
  }
  return LogicalMatrix(m.rows(), std::move(idx));
}

Matrix LogicalMatrix::dense() const {
  Matrix m(rows_, cols_.size());
  for (std::size_t j = 0; j < cols_.size(); ++j) m(cols_[j] - 1, j) = 1.0;
  return m;
}

LogicalMatrix hconcat(std::span<const LogicalMatrix> parts) {
  if (parts.empty()) throw DimensionMismatch("hconcat of nothing");
  std::vector<std::size_t> idx;
  for (const auto& p : parts) {
    if (p.rows() != parts.front().rows()) {
      throw DimensionMismatch("hconcat row counts differ");
    }
    idx.insert(idx.end(), p.col_indices().begin(), p.col_indices().end());
  }
  return LogicalMatrix(parts.front().rows(), std::move(idx));
}

Matrix operator*(const Matrix& m, const LogicalMatrix& l) {
  if (m.cols() != l.rows()) {
    throw DimensionMismatch("product " + dims(m.rows(), m.cols()) + " * " +
                            dims(l.rows(), l.cols()) + " (logical)");
  }
  Matrix out(m.rows(), l.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < l.cols(); ++j) {
      out(i, j) = m(i, l.index(j) - 1);
    }
  }
  return out;
}

Matrix operator*(const LogicalMatrix& l, const Matrix& m) {
  if (l.cols() != m.rows()) {
    throw DimensionMismatch("product " + dims(l.rows(), l.cols()) +
                            " (logical) * " + dims(m.rows(), m.cols()));
  }
  Matrix out(l.rows(), m.cols());
  for (std::size_t j = 0; j < l.cols(); ++j) {
    auto dst = out.row_span(l.index(j) - 1);
    auto src = m.row_span(j);
    for (std::size_t c = 0; c < m.cols(); ++c) dst[c] += src[c];
  }
  return out;
}

}  // namespace stpc
