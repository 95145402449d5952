#include <cstring>

#include "stpc/simd/kernels.hpp"

namespace stpc::simd {
namespace {

inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) y[j] += alpha * x[j];
}

void gemm(std::size_t m, std::size_t n, std::size_t k, const double* a,
          const double* b, double* c) {
  std::memset(c, 0, sizeof(double) * m * n);
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      if (aip != 0.0) axpy(aip, b + p * n, crow, n);
    }
  }
}

void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c) {
  std::memset(c, 0, sizeof(double) * m * n);
  for (std::size_t p = 0; p < k; ++p) {
    const double* brow = b + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const double api = a[p * m + i];
      if (api != 0.0) axpy(api, brow, c + i * n, n);
    }
  }
}

void scale_copy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) y[j] = alpha * x[j];
}

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += x[j] * y[j];
  return s;
}

constexpr KernelTable kTable{Isa::Scalar, "scalar", gemm, gemm_tn, scale_copy,
                             dot};

}  // namespace

const KernelTable& scalar_kernels() { return kTable; }

}  // namespace stpc::simd
