#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "stpc/augmented_system.hpp"
#include "stpc/logic_network.hpp"
#include "stpc/matrix.hpp"
#include "stpc/riccati.hpp"

namespace stpc {

struct SolverOptions {
  std::size_t max_sequences = 4096;  // cap on M^T
};

// Solution for one suffix (γ_t, ..., γ_{T-1}) at its first stage t. The gains
// of later stages live in the tail entries of the tree.
struct TreeEntry {
  Matrix k;                // K_t, Nn × Nn
  Matrix gain;             // G_t, Nm × Nn (empty at t = T)
  std::vector<double> c;   // noise constants per θ (stochastic trees only)
};

// Suffixes of stage t are indexed by their base-M code with γ_t most
// significant, so index order is lexicographic order.
class SolutionTree {
 public:
  SolutionTree() = default;
  SolutionTree(std::size_t horizon, std::size_t M, bool stochastic);

  std::size_t horizon() const { return horizon_; }
  std::size_t control_dim() const { return M_; }
  bool stochastic() const { return stochastic_; }

  // |S_t| = M^{T-t}
  std::size_t stage_size(std::size_t t) const;
  const TreeEntry& entry(std::size_t t, std::size_t index) const {
    return stages_.at(t).at(index);
  }
  TreeEntry& entry(std::size_t t, std::size_t index) {
    return stages_.at(t).at(index);
  }

  // One-based logical controls of suffix `index` at stage t.
  std::vector<std::size_t> sequence(std::size_t t, std::size_t index) const;
  // Index of a suffix given as one-based controls starting at stage
  // T - suffix.size().
  std::size_t index_of(std::span<const std::size_t> suffix) const;
  // Index at stage t+1 of the tail of suffix `index`.
  std::size_t tail(std::size_t t, std::size_t index) const;
  // G_t, ..., G_{T-1} along suffix `index`.
  std::vector<Matrix> gains(std::size_t t, std::size_t index) const;

 private:
  std::size_t horizon_ = 0;
  std::size_t M_ = 1;
  bool stochastic_ = false;
  std::vector<std::vector<TreeEntry>> stages_;
};

// Kernels of the deterministic recursion, on K_{t+1}.
Matrix riccati_gain(const Matrix& k_next, std::size_t gamma,
                    const AugmentedSystem& sys);
Matrix riccati_cost(const Matrix& k_next, std::size_t gamma, const Matrix& g,
                    const AugmentedSystem& sys);

// M^T with a check against the cap. Throws HorizonCapExceeded.
std::size_t checked_sequence_count(std::size_t M, std::size_t T,
                                   std::size_t cap);

namespace detail {
// Shared by the deterministic and stochastic precomputation.
SolutionTree build_tree(const AugmentedSystem& sys, std::size_t T,
                        const SolverOptions& options, bool with_noise);
}  // namespace detail

// Backward recursion from K_T = 𝐐 for every suffix of every stage.
SolutionTree precompute_tree(const AugmentedSystem& sys, std::size_t T,
                             const SolverOptions& options = {});

struct Selection {
  std::size_t index = 0;               // suffix index at stage t
  std::vector<std::size_t> sequence;   // one-based controls
  double cost = 0.0;                   // ½vᵀKv (+ c[θ] for stochastic trees)
};

// Minimizer of ½vᵀK_t(s)v over s ∈ S_t. For stochastic trees c_t(s)[θ] is
// added, with θ the one-based logical state. Ties go to the lowest index.
Selection select_sequence(const SolutionTree& tree, std::size_t t,
                          std::span<const double> v, std::size_t theta = 1);

struct SequenceSolution {
  std::vector<std::size_t> sequence;
  Matrix k;
  std::vector<Matrix> gains;
};

SequenceSolution sequence_solution(const SolutionTree& tree, std::size_t t,
                                   std::size_t index);

struct Policy {
  std::vector<std::size_t> sequence;  // γ*_0 .. γ*_{T-1}, one-based
  std::vector<Matrix> stacked_gains;  // G_t, Nm × Nn
  std::vector<Matrix> gains;          // 𝐆_t = (1_Nᵀ ⊗ I_m) G_t, m × Nn
  Matrix k0;
  double j_min = 0.0;
};

// Policy from an existing tree for the packed initial state.
Policy make_policy(const SolutionTree& tree, const AugmentedSystem& sys,
                   const HybridState& state);

// Builds the lifted system from the first structure matrix of `network`,
// precomputes the tree and selects the optimal sequence.
Policy solve(const SwitchedPlant& plant, const logic::CompiledNetwork& network,
             std::size_t T, const HybridState& state,
             const SolverOptions& options = {});

// Text dump of stages 0..T-1: one block per suffix with its K, G (and c).
void dump_tree(std::ostream& out, const SolutionTree& tree);

}  // namespace stpc
