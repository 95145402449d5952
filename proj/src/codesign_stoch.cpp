#include "stpc/codesign_stoch.hpp"

#include "stpc/error.hpp"

namespace stpc {

Matrix stoch_gain(const Matrix& k_next, std::size_t gamma,
                  const AugmentedSystem& sys) {
  return stage_gain(k_next, gamma, sys);
}

Matrix stoch_cost(const Matrix& k_next, std::size_t gamma, const Matrix& g,
                  const AugmentedSystem& sys) {
  return stage_cost(k_next, gamma, g, sys);
}

std::vector<double> noise_constants(const Matrix& k_next,
                                    const std::vector<double>& c_next,
                                    std::size_t gamma,
                                    const AugmentedSystem& sys) {
  return stage_noise_constants(k_next, c_next, gamma, sys);
}

SolutionTree precompute_stochastic(const AugmentedSystem& sys, std::size_t T,
                                   const SolverOptions& options) {
  if (!sys.stochastic) {
    throw DimensionMismatch("stochastic precomputation needs a system from "
                            "build_stochastic");
  }
  return detail::build_tree(sys, T, options, true);
}

RecedingDecision receding_step(const SolutionTree& tree,
                               const AugmentedSystem& sys, std::size_t t,
                               const HybridState& state) {
  if (t >= tree.horizon()) {
    throw DimensionMismatch("receding step needs t < T");
  }
  const std::vector<double> v = pack(state);
  const Selection sel = select_sequence(tree, t, v, state.theta.index);
  RecedingDecision d;
  d.index = sel.index;
  d.gamma = sel.sequence.front();
  d.stacked_gain = tree.entry(t, sel.index).gain;
  d.gain = reduce_gain(d.stacked_gain, sys.N, sys.m);
  d.predicted_cost = sel.cost;
  return d;
}

double expected_total_cost(const SolutionTree& tree, const HybridState& state,
                           std::size_t index) {
  const TreeEntry& e = tree.entry(0, index);
  double j = half_quadratic_form(e.k, pack(state));
  if (tree.stochastic()) j += e.c.at(state.theta.index - 1);
  return j;
}

}  // namespace stpc
