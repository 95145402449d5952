#pragma once

// Shared test data: the four-mode worked instance, random problem
// generators and small helpers. Header-only.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "stpc/augmented_system.hpp"
#include "stpc/logic_network.hpp"
#include "stpc/matrix.hpp"
#include "stpc/util/rng.hpp"

namespace stpc::testing {

inline Matrix diag(std::initializer_list<double> v) {
  Matrix d(v.size(), v.size());
  std::size_t i = 0;
  for (double x : v) {
    d(i, i) = x;
    ++i;
  }
  return d;
}

// Printed structure matrices of the two-node demo network, as one-based
// column indices.
inline LogicalMatrix demo_l1() { return LogicalMatrix(4, {1, 3, 4, 2, 4, 2, 1, 3}); }
inline LogicalMatrix demo_l2() { return LogicalMatrix(4, {2, 1, 3, 2, 1, 2, 1, 2}); }

inline SwitchedPlant demo_plant() {
  const Matrix f = diag({0.1, 0.1, 0.1});
  std::vector<ModeDynamics> dyn{
      {{{0.8, 0.1, -0.05}, {0.05, 0.9, 0.1}, {-0.1, 0.05, 0.85}},
       {{0.5, 0.0}, {0.1, 0.3}, {0.0, 0.2}},
       f},
      {{{0.7, 0.4, 0.0}, {-0.4, 0.7, 0.1}, {0.1, -0.1, 0.8}},
       {{0.3, 0.2}, {0.1, 0.4}, {0.2, 0.1}},
       f},
      {{{0.9, 0.2, 0.1}, {0.1, 0.85, 0.15}, {0.05, 0.1, 0.95}},
       {{0.8, 0.1}, {0.2, 0.7}, {0.1, 0.3}},
       f},
      {{{0.95, 0.2, -0.1}, {-0.1, 0.99, 0.2}, {0.15, -0.1, 0.93}},
       {{0.4, 0.3}, {0.2, 0.5}, {0.3, 0.2}},
       f}};
  std::vector<ModeWeights> w{
      {diag({1.0, 0.8, 1.2}), diag({0.5, 0.5}), diag({2.0, 1.5, 2.5})},
      {diag({1.2, 1.0, 0.9}), diag({0.6, 0.4}), diag({1.8, 2.0, 1.5})},
      {diag({0.7, 1.1, 0.8}), diag({0.3, 0.7}), diag({2.2, 1.8, 2.0})},
      {diag({1.1, 0.9, 1.0}), diag({0.4, 0.6}), diag({1.5, 2.2, 1.8})}};
  return SwitchedPlant(std::move(dyn), std::move(w));
}

inline logic::CompiledNetwork demo_network() {
  logic::CompiledNetwork c;
  c.state_dim = 4;
  c.control_dim = 2;
  c.structures = {demo_l1()};
  c.probabilities = {1.0};
  return c;
}

inline AugmentedSystem demo_deterministic() {
  return build_deterministic(demo_l1(), demo_plant().without_noise());
}

inline AugmentedSystem demo_stochastic() {
  const std::vector<LogicalMatrix> ls{demo_l1(), demo_l2()};
  const std::vector<double> p{0.7, 0.3};
  return build_stochastic(ls, p, demo_plant());
}

inline Matrix random_matrix(Rng& rng, std::size_t r, std::size_t c,
                            double lo = -1.0, double hi = 1.0) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.uniform(lo, hi);
  }
  return m;
}

// R Rᵀ + shift·I
inline Matrix random_spd(Rng& rng, std::size_t n, double shift) {
  const Matrix r = random_matrix(rng, n, n);
  return r * r.transpose() + Matrix::identity(n) * shift;
}

inline SwitchedPlant random_plant(Rng& rng, std::size_t N, std::size_t n,
                                  std::size_t m, std::size_t r) {
  std::vector<ModeDynamics> dyn;
  std::vector<ModeWeights> w;
  for (std::size_t i = 0; i < N; ++i) {
    const double s = 0.9 / std::sqrt(static_cast<double>(n));
    dyn.push_back({random_matrix(rng, n, n, -s, s) + Matrix::identity(n) * 0.3,
                   random_matrix(rng, n, m),
                   r ? random_matrix(rng, n, r, -0.3, 0.3) : Matrix()});
    w.push_back({random_spd(rng, n, 0.2), random_spd(rng, m, 0.3),
                 random_spd(rng, n, 0.3)});
  }
  return SwitchedPlant(std::move(dyn), std::move(w));
}

inline LogicalMatrix random_logical(Rng& rng, std::size_t rows,
                                    std::size_t cols) {
  std::vector<std::size_t> idx(cols);
  for (auto& v : idx) v = rng.below(rows) + 1;
  return LogicalMatrix(rows, std::move(idx));
}

inline HybridState random_state(Rng& rng, std::size_t N, std::size_t n,
                                double box = 10.0) {
  HybridState s{CanonicalVector(N, rng.below(N) + 1), std::vector<double>(n)};
  for (double& x : s.x) x = rng.uniform(-box, box);
  return s;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace stpc::testing
