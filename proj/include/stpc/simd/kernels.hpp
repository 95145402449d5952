#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

// Dense inner-loop kernels. Every variant implements the same contract on
// contiguous row-major buffers; the scalar table is the reference that the
// vector variants are tested against.
namespace stpc::simd {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
  Isa isa;
  const char* name;
  // c(m×n) = a(m×k) · b(k×n)
  void (*gemm)(std::size_t m, std::size_t n, std::size_t k, const double* a,
               const double* b, double* c);
  // c(m×n) = a(k×m)ᵀ · b(k×n)
  void (*gemm_tn)(std::size_t m, std::size_t n, std::size_t k,
                  const double* a, const double* b, double* c);
  // y = alpha · x
  void (*scale_copy)(double alpha, const double* x, double* y, std::size_t n);
  // Σ x_i y_i
  double (*dot)(const double* x, const double* y, std::size_t n);
};

const KernelTable& scalar_kernels();
// nullptr when the variant was not compiled into this build.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

bool cpu_supports(Isa isa);

// All variants that are both compiled in and runnable on this CPU, scalar
// first.
std::vector<const KernelTable*> available_kernels();

// Selected once: the widest runnable variant, unless STPC_KERNELS names one
// ("scalar", "avx2", "neon").
const KernelTable& active_kernels();

// Overrides the active table (tests and benchmarks). Returns the previous one.
const KernelTable& set_active_kernels(const KernelTable& table);

std::string_view isa_name(Isa isa);

}  // namespace stpc::simd
