#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "stpc/augmented_system.hpp"
#include "stpc/codesign_det.hpp"
#include "stpc/logic_network.hpp"
#include "stpc/matrix.hpp"
#include "stpc/util/rng.hpp"

namespace stpc {

struct TrajectoryStep {
  std::size_t theta = 1;
  std::vector<double> x;
  std::size_t gamma = 1;
  std::vector<double> u;
  std::size_t sigma = 0;  // 0 when no rule set was drawn
  double stage_cost = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  std::size_t terminal_theta = 1;
  std::vector<double> terminal_x;
  double terminal_cost = 0.0;
  double total_cost = 0.0;  // accumulated during the rollout
  double max_abs_state = 0.0;
};

// ½Σ(xᵀC x + uᵀD u) + ½x_TᵀQ x_T from the logged states and inputs.
double recompute_cost(const Trajectory& traj, const SwitchedPlant& plant);

// Applies the policy's sequence and u_t = 𝐆_t v_t with the per-mode dynamics
// and the first structure matrix of `network`.
Trajectory rollout_deterministic(const SwitchedPlant& plant,
                                 const logic::CompiledNetwork& network,
                                 const Policy& policy,
                                 const HybridState& state0);

// Receding-horizon loop on a stochastic tree. Each step re-selects from the
// observed state, then draws σ_t and w_t from `rng`. For horizon > T the
// tree stage is max(0, t - (horizon - T)). horizon 0 means T.
Trajectory rollout_stochastic(const SwitchedPlant& plant,
                              const AugmentedSystem& sys,
                              const SolutionTree& tree,
                              const HybridState& state0, Rng& rng,
                              std::size_t horizon = 0);
Trajectory rollout_stochastic(const SwitchedPlant& plant,
                              const AugmentedSystem& sys,
                              const SolutionTree& tree,
                              const HybridState& state0, std::uint64_t seed,
                              std::size_t horizon = 0);

struct MonteCarloConfig {
  std::size_t trials = 1000;
  double x0_low = -10.0;
  double x0_high = 10.0;
  std::uint64_t seed = 1;
  std::size_t sim_horizon = 0;  // 0 means the tree horizon
  std::size_t histogram_bins = 20;
};

struct TrialResult {
  std::size_t theta0 = 1;
  std::vector<double> x0;
  double j = 0.0;
  double j_star = 0.0;
  double ratio = 1.0;
  double max_abs_state = 0.0;
};

struct Histogram {
  std::vector<double> edges;  // bins + 1 entries
  std::vector<std::size_t> counts;
};

struct MonteCarloReport {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<TrialResult> rows;
  double mean_ratio = 0.0;
  double std_ratio = 0.0;  // sample standard deviation
  double stderr_ratio = 0.0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double max_abs_state = 0.0;
  Histogram histogram;
};

// Trial i samples θ₀ uniformly, x₀ uniformly on the box and then rolls out,
// all from Rng(derive_seed(seed, i)). J* is the stage-0 predicted cost for
// the trial's own (θ₀, x₀).
MonteCarloReport monte_carlo(const SwitchedPlant& plant,
                             const AugmentedSystem& sys,
                             const SolutionTree& tree,
                             const MonteCarloConfig& config);

struct LqrOracleResult {
  double j = 0.0;
  std::vector<std::size_t> thetas;  // θ_0 .. θ_T
  std::vector<Matrix> gains;        // m × n per stage
  std::vector<Matrix> costs;        // P_0 .. P_T, n × n
};

// Fixed logical sequence: follow the θ-path under L, then run an ordinary
// time-varying LQR pass on the active modes. No lifted matrices involved.
LqrOracleResult oracle_per_mode_lqr(const SwitchedPlant& plant,
                                    const LogicalMatrix& l,
                                    std::span<const std::size_t> sequence,
                                    const HybridState& state0);

struct MjlsOracleResult {
  double j = 0.0;  // expected cost from state0, noise included
  std::vector<std::vector<Matrix>> gains;  // [t][θ-1], m × n
  std::vector<std::vector<Matrix>> costs;  // [t][θ-1], n × n, t = 0..T
  std::vector<std::vector<double>> c;      // [t][θ-1]
};

// Coupled Riccati recursion for the Markov chain P[θ'|θ] = Σ p_i 1{L_i θ = θ'}.
// Each L_i must be N × N (a single logical control).
MjlsOracleResult oracle_mjls(const SwitchedPlant& plant,
                             std::span<const LogicalMatrix> ls,
                             std::span<const double> probabilities,
                             std::size_t T, const HybridState& state0);

// Header t,theta,x1..xn,gamma,u1..um,sigma,stage_cost. The terminal row
// leaves gamma, u and sigma empty and carries the terminal cost.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

// One row per trial, then `summary,<key>,<value>` rows.
void write_report_csv(std::ostream& out, const MonteCarloReport& report);

}  // namespace stpc
