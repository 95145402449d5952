#pragma once

#include <cstddef>
#include <vector>

#include "stpc/augmented_system.hpp"
#include "stpc/codesign_det.hpp"
#include "stpc/matrix.hpp"
#include "stpc/riccati.hpp"

// Co-design under i.i.d. rule switching σ_t ~ (p_1..p_ℓ) and process noise
// w_t ~ N(0, I_r). Trees store 𝒦_t, 𝒢_t and the per-θ noise constants c_t.
namespace stpc {

Matrix stoch_gain(const Matrix& k_next, std::size_t gamma,
                  const AugmentedSystem& sys);
Matrix stoch_cost(const Matrix& k_next, std::size_t gamma, const Matrix& g,
                  const AugmentedSystem& sys);
std::vector<double> noise_constants(const Matrix& k_next,
                                    const std::vector<double>& c_next,
                                    std::size_t gamma,
                                    const AugmentedSystem& sys);

// Requires a system built with build_stochastic.
SolutionTree precompute_stochastic(const AugmentedSystem& sys, std::size_t T,
                                   const SolverOptions& options = {});

struct RecedingDecision {
  std::size_t gamma = 1;         // first control of the best suffix
  std::size_t index = 0;         // suffix index at stage t
  Matrix stacked_gain;           // 𝒢_t, Nm × Nn
  Matrix gain;                   // 𝐆̃_t, m × Nn
  double predicted_cost = 0.0;   // ½vᵀ𝒦_t v + c_t[θ]
};

// Best suffix of S_t for the observed state.
RecedingDecision receding_step(const SolutionTree& tree,
                               const AugmentedSystem& sys, std::size_t t,
                               const HybridState& state);

// ½v₀ᵀ𝒦₀v₀ + c₀[θ₀] for the stage-0 suffix `index`.
double expected_total_cost(const SolutionTree& tree, const HybridState& state,
                           std::size_t index);

}  // namespace stpc
