#include "stpc/codesign_det.hpp"

#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "stpc/error.hpp"
#include "stpc/util/parallel.hpp"

namespace stpc {

namespace {

std::size_t power(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) out *= base;
  return out;
}

void print_matrix(std::ostream& out, const char* name, const Matrix& m) {
  char buf[64];
  out << name << " " << m.rows() << "x" << m.cols() << "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.12g", m(i, j));
      out << (j ? " " : "  ") << buf;
    }
    out << "\n";
  }
}

}  // namespace

SolutionTree::SolutionTree(std::size_t horizon, std::size_t M, bool stochastic)
    : horizon_(horizon), M_(M), stochastic_(stochastic) {
  stages_.resize(horizon + 1);
  for (std::size_t t = 0; t <= horizon; ++t) {
    stages_[t].resize(stage_size(t));
  }
}

std::size_t SolutionTree::stage_size(std::size_t t) const {
  if (t > horizon_) throw DimensionMismatch("stage beyond the horizon");
  return power(M_, horizon_ - t);
}

std::vector<std::size_t> SolutionTree::sequence(std::size_t t,
                                                std::size_t index) const {
  const std::size_t len = horizon_ - t;
  std::vector<std::size_t> seq(len);
  for (std::size_t j = len; j-- > 0;) {
    seq[j] = index % M_ + 1;
    index /= M_;
  }
  return seq;
}

std::size_t SolutionTree::index_of(std::span<const std::size_t> suffix) const {
  if (suffix.size() > horizon_) {
    throw DimensionMismatch("sequence longer than the horizon");
  }
  std::size_t index = 0;
  for (std::size_t g : suffix) {
    if (g < 1 || g > M_) throw DimensionMismatch("logical control out of range");
    index = index * M_ + (g - 1);
  }
  return index;
}

std::size_t SolutionTree::tail(std::size_t t, std::size_t index) const {
  return index % stage_size(t + 1);
}

std::vector<Matrix> SolutionTree::gains(std::size_t t,
                                        std::size_t index) const {
  std::vector<Matrix> out;
  for (std::size_t s = t; s < horizon_; ++s) {
    out.push_back(entry(s, index).gain);
    index = tail(s, index);
  }
  return out;
}

Matrix riccati_gain(const Matrix& k_next, std::size_t gamma,
                    const AugmentedSystem& sys) {
  return stage_gain(k_next, gamma, sys);
}

Matrix riccati_cost(const Matrix& k_next, std::size_t gamma, const Matrix& g,
                    const AugmentedSystem& sys) {
  return stage_cost(k_next, gamma, g, sys);
}

std::size_t checked_sequence_count(std::size_t M, std::size_t T,
                                   std::size_t cap) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < T; ++i) {
    if (count > std::numeric_limits<std::size_t>::max() / M) {
      throw HorizonCapExceeded(std::numeric_limits<std::size_t>::max(), cap);
    }
    count *= M;
  }
  if (count > cap) throw HorizonCapExceeded(count, cap);
  return count;
}

namespace detail {

SolutionTree build_tree(const AugmentedSystem& sys, std::size_t T,
                        const SolverOptions& options, bool with_noise) {
  checked_sequence_count(sys.M, T, options.max_sequences);
  SolutionTree tree(T, sys.M, with_noise);
  tree.entry(T, 0).k = sys.q;
  if (with_noise) tree.entry(T, 0).c.assign(sys.N, 0.0);

  for (std::size_t t = T; t-- > 0;) {
    const std::size_t tail_count = tree.stage_size(t + 1);
    parallel_for(tree.stage_size(t), [&](std::size_t index) {
      const std::size_t gamma = index / tail_count + 1;
      const TreeEntry& next = tree.entry(t + 1, index % tail_count);
      TreeEntry& e = tree.entry(t, index);
      e.gain = stage_gain(next.k, gamma, sys);
      e.k = stage_cost(next.k, gamma, e.gain, sys);
      if (with_noise) e.c = stage_noise_constants(next.k, next.c, gamma, sys);
    });
  }
  return tree;
}

}  // namespace detail

SolutionTree precompute_tree(const AugmentedSystem& sys, std::size_t T,
                             const SolverOptions& options) {
  return detail::build_tree(sys, T, options, false);
}

Selection select_sequence(const SolutionTree& tree, std::size_t t,
                          std::span<const double> v, std::size_t theta) {
  if (t > tree.horizon()) throw DimensionMismatch("stage beyond the horizon");
  Selection best;
  bool first = true;
  for (std::size_t i = 0; i < tree.stage_size(t); ++i) {
    const TreeEntry& e = tree.entry(t, i);
    if (e.k.rows() != v.size()) {
      throw DimensionMismatch("augmented vector has the wrong length");
    }
    double cost = half_quadratic_form(e.k, v);
    if (tree.stochastic()) cost += e.c.at(theta - 1);
    if (first || cost < best.cost) {
      best.index = i;
      best.cost = cost;
      first = false;
    }
  }
  best.sequence = tree.sequence(t, best.index);
  return best;
}

SequenceSolution sequence_solution(const SolutionTree& tree, std::size_t t,
                                   std::size_t index) {
  return SequenceSolution{tree.sequence(t, index), tree.entry(t, index).k,
                          tree.gains(t, index)};
}

Policy make_policy(const SolutionTree& tree, const AugmentedSystem& sys,
                   const HybridState& state) {
  const std::vector<double> v = pack(state);
  const Selection sel = select_sequence(tree, 0, v, state.theta.index);
  Policy p;
  p.sequence = sel.sequence;
  p.stacked_gains = tree.gains(0, sel.index);
  for (const Matrix& g : p.stacked_gains) {
    p.gains.push_back(reduce_gain(g, sys.N, sys.m));
  }
  p.k0 = tree.entry(0, sel.index).k;
  p.j_min = half_quadratic_form(p.k0, v);
  return p;
}

Policy solve(const SwitchedPlant& plant, const logic::CompiledNetwork& network,
             std::size_t T, const HybridState& state,
             const SolverOptions& options) {
  if (network.structures.empty()) {
    throw DimensionMismatch("network has no structure matrix");
  }
  if (state.x.size() != plant.n() || state.theta.dim != network.state_dim) {
    throw DimensionMismatch("initial state does not match the problem");
  }
  const AugmentedSystem sys =
      build_deterministic(network.structures.front(), plant.without_noise());
  const SolutionTree tree = precompute_tree(sys, T, options);
  return make_policy(tree, sys, state);
}

void dump_tree(std::ostream& out, const SolutionTree& tree) {
  out << "# solution tree: horizon " << tree.horizon() << ", M "
      << tree.control_dim() << (tree.stochastic() ? ", stochastic" : "")
      << "\n";
  for (std::size_t t = 0; t < tree.horizon(); ++t) {
    for (std::size_t i = 0; i < tree.stage_size(t); ++i) {
      out << "stage " << t << " sequence";
      for (std::size_t g : tree.sequence(t, i)) out << " " << g;
      out << "\n";
      const TreeEntry& e = tree.entry(t, i);
      print_matrix(out, "K", e.k);
      print_matrix(out, "G", e.gain);
      if (tree.stochastic()) {
        char buf[64];
        out << "c";
        for (double c : e.c) {
          std::snprintf(buf, sizeof buf, "%.12g", c);
          out << " " << buf;
        }
        out << "\n";
      }
    }
  }
}

}  // namespace stpc
