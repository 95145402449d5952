#pragma once

// Independent reference computations for tests. None of these go through the
// lifted matrices or the library's Riccati kernels; they use Eigen and the
// per-mode data directly.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "stpc/augmented_system.hpp"
#include "stpc/codesign_det.hpp"
#include "stpc/matrix.hpp"
#include "stpc/util/rng.hpp"

namespace stpc::testing {

inline Eigen::MatrixXd eig(const Matrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  }
  return out;
}

inline Matrix mat(const Eigen::MatrixXd& m) {
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  }
  return out;
}

inline Eigen::VectorXd vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

// Optimal cost of the time-varying LQR along a fixed mode path θ_0..θ_T,
// written as P = C + KᵀDK + (A+BK)ᵀP(A+BK).
inline double tvlqr_cost(const SwitchedPlant& plant,
                         const std::vector<std::size_t>& modes,
                         const std::vector<double>& x0) {
  const std::size_t T = modes.size() - 1;
  Eigen::MatrixXd p = eig(plant.weights(modes[T]).q);
  for (std::size_t t = T; t-- > 0;) {
    const auto a = eig(plant.dynamics(modes[t]).a);
    const auto b = eig(plant.dynamics(modes[t]).b);
    const auto c = eig(plant.weights(modes[t]).c);
    const auto d = eig(plant.weights(modes[t]).d);
    const Eigen::MatrixXd k =
        -(d + b.transpose() * p * b).inverse() * (b.transpose() * p * a);
    const Eigen::MatrixXd cl = a + b * k;
    p = c + k.transpose() * d * k + cl.transpose() * p * cl;
  }
  const Eigen::VectorXd x = vec(x0);
  return 0.5 * x.dot(p * x);
}

// Free switching: the mode is picked freely each step (θ_{t+1} = γ_t).
// Minimum over all N^T mode paths from θ_0.
inline double dslqr_min_cost(const SwitchedPlant& plant, std::size_t theta0,
                             const std::vector<double>& x0, std::size_t T) {
  const std::size_t N = plant.mode_count();
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> modes(T + 1, 1);
  modes[0] = theta0;
  std::size_t total = 1;
  for (std::size_t i = 0; i < T; ++i) total *= N;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t t = 1; t <= T; ++t) {
      modes[t] = c % N + 1;
      c /= N;
    }
    best = std::min(best, tvlqr_cost(plant, modes, x0));
  }
  return best;
}

enum class Part { A, B, F };

// The (σ,γ) slice of the lifted dynamics built straight from the mode data:
// block (θ', θ) holds X_θ when L_σ maps (γ, θ) to θ'.
inline Eigen::MatrixXd direct_slice(const SwitchedPlant& plant,
                                    const LogicalMatrix& l, std::size_t gamma,
                                    Part part) {
  const std::size_t N = l.rows();
  const std::size_t n = plant.n();
  const std::size_t w = part == Part::A ? n : part == Part::B ? plant.m()
                                                              : plant.r();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(N * n, N * w);
  for (std::size_t th = 1; th <= N; ++th) {
    const std::size_t to = l.index((gamma - 1) * N + th - 1);
    const auto& d = plant.dynamics(th);
    const Matrix& x = part == Part::A ? d.a : part == Part::B ? d.b : d.f;
    out.block((to - 1) * n, (th - 1) * w, n, w) = eig(x);
  }
  return out;
}

inline Eigen::MatrixXd block_diag(const SwitchedPlant& plant, char which) {
  const std::size_t N = plant.mode_count();
  const std::size_t s = which == 'D' ? plant.m() : plant.n();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(N * s, N * s);
  for (std::size_t i = 1; i <= N; ++i) {
    const auto& w = plant.weights(i);
    const Matrix& m = which == 'C' ? w.c : which == 'D' ? w.d : w.q;
    out.block((i - 1) * s, (i - 1) * s, s, s) = eig(m);
  }
  return out;
}

// Σ_σ p_σ Xᵀ K Y over the directly built slices.
inline Eigen::MatrixXd brute_expectation(const SwitchedPlant& plant,
                                         const std::vector<LogicalMatrix>& ls,
                                         const std::vector<double>& p,
                                         const Eigen::MatrixXd& k,
                                         std::size_t gamma, Part x, Part y) {
  Eigen::MatrixXd acc;
  for (std::size_t s = 0; s < ls.size(); ++s) {
    const auto xs = direct_slice(plant, ls[s], gamma, x);
    const auto ys = direct_slice(plant, ls[s], gamma, y);
    const Eigen::MatrixXd term = p[s] * xs.transpose() * k * ys;
    if (acc.size() == 0) {
      acc = term;
    } else {
      acc += term;
    }
  }
  return acc;
}

// Cost update in expanded form: 𝐂 + Gᵀ𝐃G + E[AᵀKA] + E[AᵀKB]G + GᵀE[BᵀKA]
// + GᵀE[BᵀKB]G.
inline Eigen::MatrixXd expanded_cost(const SwitchedPlant& plant,
                                     const std::vector<LogicalMatrix>& ls,
                                     const std::vector<double>& p,
                                     const Eigen::MatrixXd& k, std::size_t gamma,
                                     const Eigen::MatrixXd& g) {
  const auto aa = brute_expectation(plant, ls, p, k, gamma, Part::A, Part::A);
  const auto ab = brute_expectation(plant, ls, p, k, gamma, Part::A, Part::B);
  const auto ba = brute_expectation(plant, ls, p, k, gamma, Part::B, Part::A);
  const auto bb = brute_expectation(plant, ls, p, k, gamma, Part::B, Part::B);
  return block_diag(plant, 'C') + g.transpose() * block_diag(plant, 'D') * g +
         aa + ab * g + g.transpose() * ba + g.transpose() * bb * g;
}

// Dense gain -(𝐃 + E[BᵀKB])⁻¹ E[BᵀKA] without the per-mode restriction.
inline Eigen::MatrixXd dense_gain(const SwitchedPlant& plant,
                                  const std::vector<LogicalMatrix>& ls,
                                  const std::vector<double>& p,
                                  const Eigen::MatrixXd& k, std::size_t gamma) {
  const auto bb = brute_expectation(plant, ls, p, k, gamma, Part::B, Part::B);
  const auto ba = brute_expectation(plant, ls, p, k, gamma, Part::B, Part::A);
  return -(block_diag(plant, 'D') + bb).inverse() * ba;
}

// c_t[θ] by summing over every σ-path of the suffix `index` at stage t:
// E[Σ_k ½ tr(F_{θ_k}ᵀ K_{k+1}[θ_{k+1}] F_{θ_k})], with K_{k+1}[θ] the
// diagonal block of the tail's cost matrix.
inline double path_enumerated_constant(const SolutionTree& tree,
                                       const SwitchedPlant& plant,
                                       const std::vector<LogicalMatrix>& ls,
                                       const std::vector<double>& p,
                                       std::size_t t, std::size_t index,
                                       std::size_t theta) {
  const std::size_t T = tree.horizon();
  const std::size_t n = plant.n();
  const std::size_t N = plant.mode_count();
  const std::vector<std::size_t> seq = tree.sequence(t, index);
  std::size_t paths = 1;
  for (std::size_t i = t; i < T; ++i) paths *= ls.size();
  double total = 0.0;
  for (std::size_t code = 0; code < paths; ++code) {
    std::size_t c = code;
    double prob = 1.0;
    double acc = 0.0;
    std::size_t th = theta;
    std::size_t idx = index;
    for (std::size_t k = t; k < T; ++k) {
      const std::size_t sigma = c % ls.size();
      c /= ls.size();
      prob *= p[sigma];
      const std::size_t gamma = seq[k - t];
      const std::size_t next = ls[sigma].index((gamma - 1) * N + th - 1);
      idx = tree.tail(k, idx);
      const Eigen::MatrixXd kb =
          eig(tree.entry(k + 1, idx).k).block((next - 1) * n, (next - 1) * n, n, n);
      const Eigen::MatrixXd f = eig(plant.dynamics(th).f);
      acc += 0.5 * (f.transpose() * kb * f).trace();
      th = next;
    }
    total += prob * acc;
  }
  return total;
}

// One noisy rollout of a fixed suffix with its stored gains, written with the
// per-mode dynamics: u = G[θ] x, θ' = L_σ(γ, θ), x' = A_θx + B_θu + F_θw.
inline double fixed_suffix_rollout(const SolutionTree& tree,
                                   const SwitchedPlant& plant,
                                   const std::vector<LogicalMatrix>& ls,
                                   const std::vector<double>& p, std::size_t index,
                                   std::size_t theta, Eigen::VectorXd x, Rng& rng) {
  const std::size_t N = plant.mode_count();
  const std::size_t n = plant.n();
  const std::size_t m = plant.m();
  const auto seq = tree.sequence(0, index);
  const auto gains = tree.gains(0, index);
  double j = 0.0;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const auto& dyn = plant.dynamics(theta);
    const auto& w = plant.weights(theta);
    const Eigen::MatrixXd g =
        eig(gains[k]).block((theta - 1) * m, (theta - 1) * n, m, n);
    const Eigen::VectorXd u = g * x;
    j += 0.5 * x.dot(eig(w.c) * x) + 0.5 * u.dot(eig(w.d) * u);
    const std::size_t sigma = rng.categorical(p);
    Eigen::VectorXd noise(plant.r());
    for (Eigen::Index i = 0; i < noise.size(); ++i) noise(i) = rng.normal();
    x = eig(dyn.a) * x + eig(dyn.b) * u + eig(dyn.f) * noise;
    theta = ls[sigma].index((seq[k] - 1) * N + theta - 1);
  }
  return j + 0.5 * x.dot(eig(plant.weights(theta).q) * x);
}

struct MjlsReference {
  std::vector<std::vector<Eigen::MatrixXd>> p;  // [t][θ-1]
  std::vector<std::vector<Eigen::MatrixXd>> k;  // [t][θ-1], gains
  std::vector<std::vector<double>> c;           // [t][θ-1]
};

// Coupled Riccati equations of the Markov jump system with transition
// P[θ'|θ] = Σ_i p_i 1{L_i(θ) = θ'}, in the standard (non-Joseph) form.
inline MjlsReference mjls_reference(const SwitchedPlant& plant,
                                    const std::vector<LogicalMatrix>& ls,
                                    const std::vector<double>& p,
                                    std::size_t T) {
  const std::size_t N = plant.mode_count();
  Eigen::MatrixXd trans = Eigen::MatrixXd::Zero(N, N);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    for (std::size_t th = 0; th < N; ++th) trans(th, ls[i].index(th) - 1) += p[i];
  }
  MjlsReference out;
  out.p.resize(T + 1);
  out.k.resize(T);
  out.c.assign(T + 1, std::vector<double>(N, 0.0));
  for (std::size_t th = 1; th <= N; ++th) out.p[T].push_back(eig(plant.weights(th).q));
  for (std::size_t t = T; t-- > 0;) {
    for (std::size_t th = 0; th < N; ++th) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(plant.n(), plant.n());
      double cn = 0.0;
      for (std::size_t to = 0; to < N; ++to) {
        e += trans(th, to) * out.p[t + 1][to];
        cn += trans(th, to) * out.c[t + 1][to];
      }
      const auto& dyn = plant.dynamics(th + 1);
      const auto& w = plant.weights(th + 1);
      const auto a = eig(dyn.a);
      const auto b = eig(dyn.b);
      const auto f = eig(dyn.f);
      const Eigen::MatrixXd h = eig(w.d) + b.transpose() * e * b;
      const Eigen::MatrixXd bea = b.transpose() * e * a;
      out.k[t].push_back(-h.ldlt().solve(bea));
      out.p[t].push_back(eig(w.c) + a.transpose() * e * a - bea.transpose() * h.ldlt().solve(bea));
      out.c[t][th] = 0.5 * (f.transpose() * e * f).trace() + cn;
    }
  }
  return out;
}

// Central difference Jacobian of f: ℝⁿ → ℝᵖ (column-major flattening of
// the output is the caller's choice).
inline Eigen::MatrixXd central_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h = 1e-6) {
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd jac(f0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x;
    Eigen::VectorXd xm = x;
    xp(i) += h;
    xm(i) -= h;
    jac.col(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return jac;
}

}  // namespace stpc::testing
