#pragma once

#include <cstddef>
#include <vector>

#include "stpc/augmented_system.hpp"
#include "stpc/matrix.hpp"

// One backward Riccati step on the lifted system. The deterministic system is
// the ℓ = 1 case, so both co-design modules share these kernels.
namespace stpc {

enum class Lifted { A, B, F };

// Σ_σ p_σ · X(σ,γ)ᵀ K Y(σ,γ), where X(σ,γ) is the (σ,γ) column block of the
// lifted matrix X. γ is one-based.
Matrix expected_quadratic(const Matrix& k_next, Lifted x, Lifted y,
                          std::size_t gamma, const AugmentedSystem& sys);

// Stage gain for logical control γ, Nm × Nn, block diagonal over θ:
//   G_θθ = -(H_θθ)⁻¹ R_θθ,  H = 𝐃 + E[𝐁ᵀK𝐁],  R = E[𝐁ᵀK𝐀].
// Throws NotPositiveDefinite when an H_θθ has min eigenvalue below 1e-10.
Matrix stage_gain(const Matrix& k_next, std::size_t gamma,
                  const AugmentedSystem& sys);

// K = 𝐂 + Gᵀ𝐃G + Σ_σ p_σ (𝐀_σγ + 𝐁_σγ G)ᵀ K_next (𝐀_σγ + 𝐁_σγ G), symmetrized.
Matrix stage_cost(const Matrix& k_next, std::size_t gamma, const Matrix& g,
                  const AugmentedSystem& sys);

// c[θ] = ½ Σ_σ p_σ tr(F_σγθᵀ K_next F_σγθ) + Σ_σ p_σ c_next[L_σ(γ, θ)], with
// F_σγθ the θ-th n×r column block of F̃(σ,γ). Returns N values.
std::vector<double> stage_noise_constants(const Matrix& k_next,
                                          const std::vector<double>& c_next,
                                          std::size_t gamma,
                                          const AugmentedSystem& sys);

// (1_Nᵀ ⊗ I_m) G : m × Nn.
Matrix reduce_gain(const Matrix& g, std::size_t N, std::size_t m);

}  // namespace stpc
