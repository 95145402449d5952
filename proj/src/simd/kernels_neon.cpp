#include <arm_neon.h>

#include <cstring>

#include "stpc/simd/kernels.hpp"

namespace stpc::simd {
namespace {

inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    float64x2_t y0 = vld1q_f64(y + j);
    float64x2_t y1 = vld1q_f64(y + j + 2);
    y0 = vfmaq_f64(y0, va, vld1q_f64(x + j));
    y1 = vfmaq_f64(y1, va, vld1q_f64(x + j + 2));
    vst1q_f64(y + j, y0);
    vst1q_f64(y + j + 2, y1);
  }
  for (; j < n; ++j) y[j] += alpha * x[j];
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
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) vst1q_f64(y + j, vmulq_f64(va, vld1q_f64(x + j)));
  for (; j < n; ++j) y[j] = alpha * x[j];
}

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) acc = vfmaq_f64(acc, vld1q_f64(x + j), vld1q_f64(y + j));
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; j < n; ++j) s += x[j] * y[j];
  return s;
}

constexpr KernelTable kTable{Isa::Neon, "neon", gemm, gemm_tn, scale_copy,
                             dot};

}  // namespace

const KernelTable* neon_kernels() { return &kTable; }

}  // namespace stpc::simd
