#include "stpc/stp.hpp"

#include <numeric>
#include <string>
#include <vector>

#include "stpc/error.hpp"
#include "stpc/simd/kernels.hpp"

namespace stpc {

namespace {

// a ⊗ I_k
Matrix kron_eye(const Matrix& a, std::size_t k) {
  if (k == 1) return a;
  Matrix out(a.rows() * k, a.cols() * k);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double v = a(i, j);
      if (v == 0.0) continue;
      for (std::size_t d = 0; d < k; ++d) out(i * k + d, j * k + d) = v;
    }
  }
  return out;
}

}  // namespace

Matrix stp(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.cols();
  const std::size_t p = b.rows();
  if (n == p) return a * b;
  const std::size_t l = std::lcm(n, p);
  return kron_eye(a, l / n) * kron_eye(b, l / p);
}

LogicalMatrix stp(const LogicalMatrix& a, const LogicalMatrix& b) {
  const std::size_t n = a.cols();
  const std::size_t p = b.rows();
  const std::size_t l = std::lcm(n, p);
  const std::size_t ka = l / n;
  const std::size_t kb = l / p;
  std::vector<std::size_t> idx;
  idx.reserve(b.cols() * kb);
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t d = 0; d < kb; ++d) {
      // Row (zero-based) hit by column j*kb+d of B ⊗ I_kb.
      const std::size_t r = (b.index(j) - 1) * kb + d;
      const std::size_t ja = r / ka;
      const std::size_t da = r % ka;
      idx.push_back((a.index(ja) - 1) * ka + da + 1);
    }
  }
  return LogicalMatrix(a.rows() * ka, std::move(idx));
}

Matrix stp(const LogicalMatrix& a, const Matrix& b) {
  const std::size_t l = std::lcm(a.cols(), b.rows());
  return kron_identity(a, l / a.cols()) * kron_eye(b, l / b.rows());
}

Matrix stp(const Matrix& a, const LogicalMatrix& b) {
  const std::size_t l = std::lcm(a.cols(), b.rows());
  return kron_eye(a, l / a.cols()) * kron_identity(b, l / b.rows());
}

Matrix stp_chain(std::initializer_list<Matrix> factors) {
  if (factors.size() == 0) throw DimensionMismatch("empty STP chain");
  auto it = factors.begin();
  Matrix acc = *it++;
  for (; it != factors.end(); ++it) acc = stp(acc, *it);
  return acc;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  if (out.empty()) return out;
  const auto& kern = simd::active_kernels();
  const std::size_t out_cols = out.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < b.rows(); ++k) {
      double* dst = out.data().data() + (i * b.rows() + k) * out_cols;
      const double* src = b.row_span(k).data();
      for (std::size_t j = 0; j < a.cols(); ++j) {
        kern.scale_copy(a(i, j), src, dst + j * b.cols(), b.cols());
      }
    }
  }
  return out;
}

LogicalMatrix kron(const LogicalMatrix& a, const LogicalMatrix& b) {
  std::vector<std::size_t> idx;
  idx.reserve(a.cols() * b.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t c = 0; c < b.cols(); ++c) {
      idx.push_back((a.index(j) - 1) * b.rows() + b.index(c));
    }
  }
  return LogicalMatrix(a.rows() * b.rows(), std::move(idx));
}

LogicalMatrix kron_identity(const LogicalMatrix& a, std::size_t k) {
  return kron(a, LogicalMatrix::identity(k));
}

LogicalMatrix identity_kron(std::size_t k, const LogicalMatrix& a) {
  return kron(LogicalMatrix::identity(k), a);
}

Matrix khatri_rao(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw ColumnMismatch("Khatri-Rao product needs equal column counts, got " +
                         std::to_string(a.cols()) + " and " +
                         std::to_string(b.cols()));
  }
  Matrix out(a.rows() * b.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      const double v = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k) {
        out(i * b.rows() + k, j) = v * b(k, j);
      }
    }
  }
  return out;
}

LogicalMatrix khatri_rao(const LogicalMatrix& a, const LogicalMatrix& b) {
  if (a.cols() != b.cols()) {
    throw ColumnMismatch("Khatri-Rao product needs equal column counts, got " +
                         std::to_string(a.cols()) + " and " +
                         std::to_string(b.cols()));
  }
  std::vector<std::size_t> idx(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    idx[j] = (a.index(j) - 1) * b.rows() + b.index(j);
  }
  return LogicalMatrix(a.rows() * b.rows(), std::move(idx));
}

LogicalMatrix power_reducing(std::size_t k) {
  if (k == 0) throw DimensionMismatch("power-reducing matrix of order 0");
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 1; i <= k; ++i) idx[i - 1] = (i - 1) * k + i;
  return LogicalMatrix(k * k, std::move(idx));
}

Matrix swap_matrix(std::size_t r, const Matrix& a) {
  return kron(Matrix::identity(r), a);
}

Matrix stp_linear_grad(const Matrix& a, std::size_t x_dim) {
  if (x_dim == 0) throw DimensionMismatch("gradient w.r.t. empty vector");
  const std::size_t l = std::lcm(a.cols(), x_dim);
  return kron_eye(a, l / a.cols());
}

Matrix stp_quadratic_grad(const Matrix& a, const Matrix& x) {
  if (x.cols() != 1 || x.rows() == 0) {
    throw DimensionMismatch("quadratic gradient needs a column vector");
  }
  const std::size_t n = x.rows();
  const std::size_t l = std::lcm(a.cols(), n);
  const Matrix a_hat = kron_eye(a, l / a.cols());
  const std::size_t block = l / n;
  const Matrix xt = x.transpose();
  const Matrix ax = stp(a, x);

  std::vector<Matrix> parts;
  parts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Matrix ei(1, n);
    ei(0, i) = 1.0;
    Matrix term = stp(ei, ax);
    term += stp(xt, a_hat.block(0, i * block, a_hat.rows(), block));
    parts.push_back(std::move(term));
  }
  Matrix out(parts.front().rows(), parts.front().cols() * n);
  for (std::size_t i = 0; i < n; ++i) {
    out.set_block(0, i * parts[i].cols(), parts[i]);
  }
  return out;
}

}  // namespace stpc
