#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "stpc/matrix.hpp"

namespace stpc {

struct ModeDynamics {
  Matrix a;  // n×n
  Matrix b;  // n×m
  Matrix f;  // n×r, empty when the plant is noise-free
};

struct ModeWeights {
  Matrix c;  // n×n, symmetric PSD
  Matrix d;  // m×m, symmetric PD
  Matrix q;  // n×n, symmetric PD
};

// Per-mode linear dynamics and quadratic weights. Mode i (one-based) is
// active when ι(θ) = i.
class SwitchedPlant {
 public:
  SwitchedPlant(std::vector<ModeDynamics> dynamics,
                std::vector<ModeWeights> weights);

  std::size_t mode_count() const { return dynamics_.size(); }
  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  std::size_t r() const { return r_; }
  bool has_noise() const { return r_ > 0; }

  const ModeDynamics& dynamics(std::size_t mode) const {
    return dynamics_.at(mode - 1);
  }
  const ModeWeights& weights(std::size_t mode) const {
    return weights_.at(mode - 1);
  }

  // Copy with every F_i multiplied by `factor`.
  SwitchedPlant with_noise_scale(double factor) const;
  // Copy without noise inputs.
  SwitchedPlant without_noise() const;

 private:
  std::vector<ModeDynamics> dynamics_;
  std::vector<ModeWeights> weights_;
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::size_t r_ = 0;
};

// Lifted dynamics on v = θ⃗ ⋉ x. A deterministic system is the ℓ = 1 case
// with probability 1 and no noise matrix.
struct AugmentedSystem {
  std::size_t N = 1;    // logical states
  std::size_t M = 1;    // logical controls
  std::size_t ell = 1;  // rule sets
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t r = 0;
  bool stochastic = false;

  Matrix a;  // Nn × ℓMNn
  Matrix b;  // Nn × ℓMNm
  Matrix f;  // Nn × ℓMNr (stochastic only)
  std::vector<double> probabilities;
  std::vector<LogicalMatrix> structures;  // L_1..L_ℓ

  Matrix c;  // diag(C_1..C_N)
  Matrix d;  // diag(D_1..D_N)
  Matrix q;  // diag(Q_1..Q_N)

  std::size_t state_size() const { return N * n; }
  std::size_t input_size() const { return N * m; }

  // Ã ⋉ δ_ℓ^σ ⋉ δ_M^γ : the Nn×Nn block acting on v. One-based indices.
  Matrix a_block(std::size_t sigma, std::size_t gamma) const;
  // B̃ ⋉ δ_ℓ^σ ⋉ δ_M^γ : Nn×Nm, acting on θ⃗ ⋉ u.
  Matrix b_block(std::size_t sigma, std::size_t gamma) const;
  // F̃ ⋉ δ_ℓ^σ ⋉ δ_M^γ : Nn×Nr, acting on θ⃗ ⋉ w.
  Matrix f_block(std::size_t sigma, std::size_t gamma) const;
};

// 𝐀 = L(I_{MN} ⊗ [A_1..A_N])(I_M ⊗ Φ_N), likewise 𝐁.
AugmentedSystem build_deterministic(const LogicalMatrix& l,
                                    const SwitchedPlant& plant);

// Ã, B̃, F̃ from L̃ = [L_1..L_ℓ]. Rejects plants without F.
AugmentedSystem build_stochastic(std::span<const LogicalMatrix> ls,
                                 std::span<const double> probabilities,
                                 const SwitchedPlant& plant);

struct HybridState {
  CanonicalVector theta;
  std::vector<double> x;
};

// v = δ_N^{ι(θ)} ⊗ x
std::vector<double> pack(const HybridState& state);

// Recovers (θ, x) from v ∈ ℝ^{Nn}. When v is zero the block is unobservable
// and `theta_hint` (one-based) is used; without a hint the first block is
// assumed. Throws AmbiguousBlock when more than one block is nonzero.
HybridState unpack(std::span<const double> v, std::size_t N, std::size_t n,
                   std::optional<std::size_t> theta_hint = std::nullopt);

}  // namespace stpc
