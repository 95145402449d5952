#include <atomic>
#include <cstdlib>
#include <string>

#include "stpc/simd/kernels.hpp"

namespace stpc::simd {

#ifndef STPC_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif
#ifndef STPC_HAVE_NEON
const KernelTable* neon_kernels() { return nullptr; }
#endif

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "unknown";
}

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(STPC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(STPC_HAVE_NEON)
      return true;  // Advanced SIMD is mandatory on AArch64.
#else
      return false;
#endif
  }
  return false;
}

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> out{&scalar_kernels()};
  if (const auto* t = avx2_kernels(); t && cpu_supports(Isa::Avx2)) {
    out.push_back(t);
  }
  if (const auto* t = neon_kernels(); t && cpu_supports(Isa::Neon)) {
    out.push_back(t);
  }
  return out;
}

namespace {

const KernelTable* select_default() {
  const auto available = available_kernels();
  if (const char* env = std::getenv("STPC_KERNELS")) {
    const std::string wanted(env);
    for (const auto* t : available) {
      if (wanted == t->name) return t;
    }
  }
  return available.back();
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{select_default()};
  return slot;
}

}  // namespace

const KernelTable& active_kernels() {
  return *active_slot().load(std::memory_order_acquire);
}

const KernelTable& set_active_kernels(const KernelTable& table) {
  return *active_slot().exchange(&table, std::memory_order_acq_rel);
}

}  // namespace stpc::simd
