#include "stpc/simulator.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "stpc/codesign_stoch.hpp"
#include "stpc/error.hpp"
#include "stpc/util/parallel.hpp"

namespace stpc {

namespace {

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw DimensionMismatch("matrix-vector shape");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

void axpy_into(std::vector<double>& y, const std::vector<double>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += x[i];
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double stage_cost_of(const SwitchedPlant& plant, std::size_t theta,
                     std::span<const double> x, std::span<const double> u) {
  const ModeWeights& w = plant.weights(theta);
  return half_quadratic_form(w.c, x) + half_quadratic_form(w.d, u);
}

// x' = A x + B u (+ F w) for mode θ.
std::vector<double> plant_step(const SwitchedPlant& plant, std::size_t theta,
                               std::span<const double> x,
                               std::span<const double> u,
                               std::span<const double> w) {
  const ModeDynamics& d = plant.dynamics(theta);
  std::vector<double> next = matvec(d.a, x);
  axpy_into(next, matvec(d.b, u));
  if (!w.empty()) axpy_into(next, matvec(d.f, w));
  return next;
}

void finish(Trajectory& traj, const SwitchedPlant& plant, std::size_t theta,
            std::vector<double> x) {
  traj.terminal_theta = theta;
  traj.terminal_cost = half_quadratic_form(plant.weights(theta).q, x);
  traj.total_cost += traj.terminal_cost;
  traj.max_abs_state = std::max(traj.max_abs_state, max_abs(x));
  traj.terminal_x = std::move(x);
}

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  }
  return out;
}

Matrix from_eigen(const Eigen::MatrixXd& m) {
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  }
  return out;
}

Eigen::VectorXd to_eigen(std::span<const double> x) {
  return Eigen::Map<const Eigen::VectorXd>(x.data(),
                                           static_cast<Eigen::Index>(x.size()));
}

void format_number(std::ostream& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  out << buf;
}

}  // namespace

double recompute_cost(const Trajectory& traj, const SwitchedPlant& plant) {
  double total = 0.0;
  for (const auto& s : traj.steps) {
    total += stage_cost_of(plant, s.theta, s.x, s.u);
  }
  total += half_quadratic_form(plant.weights(traj.terminal_theta).q,
                               traj.terminal_x);
  return total;
}

Trajectory rollout_deterministic(const SwitchedPlant& plant,
                                 const logic::CompiledNetwork& network,
                                 const Policy& policy,
                                 const HybridState& state0) {
  if (policy.gains.size() != policy.sequence.size()) {
    throw DimensionMismatch("policy gains and sequence differ in length");
  }
  if (state0.x.size() != plant.n() || state0.theta.dim != network.state_dim) {
    throw DimensionMismatch("initial state does not match the problem");
  }
  const LogicalMatrix& l = network.structures.front();
  Trajectory traj;
  HybridState s = state0;
  for (std::size_t t = 0; t < policy.sequence.size(); ++t) {
    TrajectoryStep step;
    step.theta = s.theta.index;
    step.x = s.x;
    step.gamma = policy.sequence[t];
    step.u = matvec(policy.gains[t], pack(s));
    step.stage_cost = stage_cost_of(plant, step.theta, step.x, step.u);
    traj.total_cost += step.stage_cost;
    traj.max_abs_state = std::max(traj.max_abs_state, max_abs(s.x));

    s.x = plant_step(plant, step.theta, step.x, step.u, {});
    s.theta = logic::step_logical(
        l, CanonicalVector(network.control_dim, step.gamma), s.theta);
    traj.steps.push_back(std::move(step));
  }
  finish(traj, plant, s.theta.index, std::move(s.x));
  return traj;
}

Trajectory rollout_stochastic(const SwitchedPlant& plant,
                              const AugmentedSystem& sys,
                              const SolutionTree& tree,
                              const HybridState& state0, Rng& rng,
                              std::size_t horizon) {
  if (!tree.stochastic()) throw DimensionMismatch("tree is not stochastic");
  if (state0.x.size() != plant.n() || state0.theta.dim != sys.N) {
    throw DimensionMismatch("initial state does not match the problem");
  }
  const std::size_t T = tree.horizon();
  if (horizon == 0) horizon = T;
  Trajectory traj;
  HybridState s = state0;
  std::vector<double> w(sys.r);
  for (std::size_t t = 0; t < horizon; ++t) {
    const std::size_t stage = t + T >= horizon ? t + T - horizon : 0;
    const RecedingDecision d = receding_step(tree, sys, stage, s);

    TrajectoryStep step;
    step.theta = s.theta.index;
    step.x = s.x;
    step.gamma = d.gamma;
    step.u = matvec(d.gain, pack(s));
    step.stage_cost = stage_cost_of(plant, step.theta, step.x, step.u);
    traj.total_cost += step.stage_cost;
    traj.max_abs_state = std::max(traj.max_abs_state, max_abs(s.x));

    step.sigma = rng.categorical(sys.probabilities) + 1;
    for (double& wi : w) wi = rng.normal();
    s.x = plant_step(plant, step.theta, step.x, step.u, w);
    s.theta = logic::step_logical(sys.structures[step.sigma - 1],
                                  CanonicalVector(sys.M, step.gamma), s.theta);
    traj.steps.push_back(std::move(step));
  }
  finish(traj, plant, s.theta.index, std::move(s.x));
  return traj;
}

Trajectory rollout_stochastic(const SwitchedPlant& plant,
                              const AugmentedSystem& sys,
                              const SolutionTree& tree,
                              const HybridState& state0, std::uint64_t seed,
                              std::size_t horizon) {
  Rng rng(seed);
  return rollout_stochastic(plant, sys, tree, state0, rng, horizon);
}

MonteCarloReport monte_carlo(const SwitchedPlant& plant,
                             const AugmentedSystem& sys,
                             const SolutionTree& tree,
                             const MonteCarloConfig& config) {
  if (config.trials == 0) throw DimensionMismatch("trials must be >= 1");
  if (!(config.x0_low <= config.x0_high)) {
    throw DimensionMismatch("x0 box is empty");
  }
  MonteCarloReport report;
  report.trials = config.trials;
  report.seed = config.seed;
  report.rows.resize(config.trials);

  parallel_for(config.trials, [&](std::size_t trial) {
    Rng rng(derive_seed(config.seed, trial));
    HybridState s0{CanonicalVector(sys.N, rng.below(sys.N) + 1),
                   std::vector<double>(plant.n())};
    for (double& xi : s0.x) xi = rng.uniform(config.x0_low, config.x0_high);
    const double j_star = receding_step(tree, sys, 0, s0).predicted_cost;
    const Trajectory traj =
        rollout_stochastic(plant, sys, tree, s0, rng, config.sim_horizon);

    TrialResult& row = report.rows[trial];
    row.theta0 = s0.theta.index;
    row.x0 = s0.x;
    row.j = traj.total_cost;
    row.j_star = j_star;
    if (j_star > 0.0) {
      row.ratio = traj.total_cost / j_star;
    } else {
      row.ratio = traj.total_cost == 0.0
                      ? 1.0
                      : std::numeric_limits<double>::infinity();
    }
    row.max_abs_state = traj.max_abs_state;
  });

  double sum = 0.0;
  report.min_ratio = std::numeric_limits<double>::infinity();
  report.max_ratio = -std::numeric_limits<double>::infinity();
  for (const auto& row : report.rows) {
    sum += row.ratio;
    report.min_ratio = std::min(report.min_ratio, row.ratio);
    report.max_ratio = std::max(report.max_ratio, row.ratio);
    report.max_abs_state = std::max(report.max_abs_state, row.max_abs_state);
  }
  const double n = static_cast<double>(config.trials);
  report.mean_ratio = sum / n;
  double ss = 0.0;
  for (const auto& row : report.rows) {
    ss += (row.ratio - report.mean_ratio) * (row.ratio - report.mean_ratio);
  }
  report.std_ratio = config.trials > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  report.stderr_ratio = report.std_ratio / std::sqrt(n);

  const std::size_t bins = std::max<std::size_t>(1, config.histogram_bins);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& row : report.rows) {
    if (!std::isfinite(row.ratio)) continue;
    lo = std::min(lo, row.ratio);
    hi = std::max(hi, row.ratio);
  }
  if (!std::isfinite(lo)) lo = hi = 1.0;
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  Histogram& h = report.histogram;
  h.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) {
    h.edges[b] = lo + (hi - lo) * static_cast<double>(b) /
                          static_cast<double>(bins);
  }
  h.counts.assign(bins, 0);
  for (const auto& row : report.rows) {
    if (!std::isfinite(row.ratio)) continue;
    auto b = static_cast<std::size_t>((row.ratio - lo) / (hi - lo) *
                                      static_cast<double>(bins));
    ++h.counts[std::min(b, bins - 1)];
  }
  return report;
}

LqrOracleResult oracle_per_mode_lqr(const SwitchedPlant& plant,
                                    const LogicalMatrix& l,
                                    std::span<const std::size_t> sequence,
                                    const HybridState& state0) {
  const std::size_t N = l.rows();
  if (state0.theta.dim != N || l.cols() % N != 0 ||
      state0.x.size() != plant.n()) {
    throw DimensionMismatch("oracle inputs do not match");
  }
  const std::size_t T = sequence.size();
  LqrOracleResult out;
  out.thetas.push_back(state0.theta.index);
  for (std::size_t t = 0; t < T; ++t) {
    const std::size_t col = (sequence[t] - 1) * N + out.thetas.back() - 1;
    if (col >= l.cols()) throw DimensionMismatch("logical control out of range");
    out.thetas.push_back(l.index(col));
  }

  std::vector<Eigen::MatrixXd> p(T + 1);
  std::vector<Eigen::MatrixXd> k(T);
  p[T] = to_eigen(plant.weights(out.thetas[T]).q);
  for (std::size_t t = T; t-- > 0;) {
    const std::size_t mode = out.thetas[t];
    const Eigen::MatrixXd a = to_eigen(plant.dynamics(mode).a);
    const Eigen::MatrixXd b = to_eigen(plant.dynamics(mode).b);
    const Eigen::MatrixXd c = to_eigen(plant.weights(mode).c);
    const Eigen::MatrixXd d = to_eigen(plant.weights(mode).d);
    const Eigen::MatrixXd s = d + b.transpose() * p[t + 1] * b;
    const Eigen::MatrixXd bpa = b.transpose() * p[t + 1] * a;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
    k[t] = -ldlt.solve(bpa);
    Eigen::MatrixXd next =
        c + a.transpose() * p[t + 1] * a - bpa.transpose() * ldlt.solve(bpa);
    p[t] = 0.5 * (next + next.transpose());
  }
  const Eigen::VectorXd x0 = to_eigen(state0.x);
  out.j = 0.5 * x0.dot(p[0] * x0);
  for (const auto& g : k) out.gains.push_back(from_eigen(g));
  for (const auto& pt : p) out.costs.push_back(from_eigen(pt));
  return out;
}

MjlsOracleResult oracle_mjls(const SwitchedPlant& plant,
                             std::span<const LogicalMatrix> ls,
                             std::span<const double> probabilities,
                             std::size_t T, const HybridState& state0) {
  if (ls.empty() || ls.size() != probabilities.size()) {
    throw DimensionMismatch("one probability per structure matrix required");
  }
  const std::size_t N = ls.front().rows();
  for (const auto& l : ls) {
    if (l.rows() != N || l.cols() != N) {
      throw DimensionMismatch("Markov degeneration needs N x N structures");
    }
  }
  if (plant.mode_count() != N || state0.theta.dim != N) {
    throw DimensionMismatch("mode count differs from N");
  }
  // trans(θ', θ) = P[θ'|θ]
  Eigen::MatrixXd trans = Eigen::MatrixXd::Zero(N, N);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    for (std::size_t th = 0; th < N; ++th) {
      trans(ls[i].index(th) - 1, th) += probabilities[i];
    }
  }

  MjlsOracleResult out;
  out.gains.assign(T, std::vector<Matrix>(N));
  out.costs.assign(T + 1, std::vector<Matrix>(N));
  out.c.assign(T + 1, std::vector<double>(N, 0.0));
  std::vector<Eigen::MatrixXd> p_next(N);
  for (std::size_t th = 0; th < N; ++th) {
    p_next[th] = to_eigen(plant.weights(th + 1).q);
    out.costs[T][th] = from_eigen(p_next[th]);
  }
  for (std::size_t t = T; t-- > 0;) {
    std::vector<Eigen::MatrixXd> p_now(N);
    for (std::size_t th = 0; th < N; ++th) {
      const std::size_t n = plant.n();
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
      double c_expect = 0.0;
      for (std::size_t to = 0; to < N; ++to) {
        e += trans(to, th) * p_next[to];
        c_expect += trans(to, th) * out.c[t + 1][to];
      }
      const Eigen::MatrixXd a = to_eigen(plant.dynamics(th + 1).a);
      const Eigen::MatrixXd b = to_eigen(plant.dynamics(th + 1).b);
      const Eigen::MatrixXd c = to_eigen(plant.weights(th + 1).c);
      const Eigen::MatrixXd d = to_eigen(plant.weights(th + 1).d);
      const Eigen::MatrixXd s = d + b.transpose() * e * b;
      const Eigen::MatrixXd bea = b.transpose() * e * a;
      const Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
      out.gains[t][th] = from_eigen(-ldlt.solve(bea));
      Eigen::MatrixXd p =
          c + a.transpose() * e * a - bea.transpose() * ldlt.solve(bea);
      p_now[th] = 0.5 * (p + p.transpose());
      out.costs[t][th] = from_eigen(p_now[th]);
      double noise = 0.0;
      if (plant.has_noise()) {
        const Eigen::MatrixXd f = to_eigen(plant.dynamics(th + 1).f);
        noise = 0.5 * (f.transpose() * e * f).trace();
      }
      out.c[t][th] = noise + c_expect;
    }
    p_next = std::move(p_now);
  }
  const std::size_t th0 = state0.theta.index - 1;
  const Eigen::VectorXd x0 = to_eigen(state0.x);
  out.j = 0.5 * x0.dot(to_eigen(out.costs[0][th0]) * x0) + out.c[0][th0];
  return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const std::size_t n = traj.terminal_x.size();
  const std::size_t m = traj.steps.empty() ? 0 : traj.steps.front().u.size();
  out << "t,theta";
  for (std::size_t i = 1; i <= n; ++i) out << ",x" << i;
  out << ",gamma";
  for (std::size_t i = 1; i <= m; ++i) out << ",u" << i;
  out << ",sigma,stage_cost\n";
  for (std::size_t t = 0; t < traj.steps.size(); ++t) {
    const auto& s = traj.steps[t];
    out << t << "," << s.theta;
    for (double v : s.x) {
      out << ",";
      format_number(out, v);
    }
    out << "," << s.gamma;
    for (double v : s.u) {
      out << ",";
      format_number(out, v);
    }
    out << ",";
    if (s.sigma > 0) out << s.sigma;
    out << ",";
    format_number(out, s.stage_cost);
    out << "\n";
  }
  out << traj.steps.size() << "," << traj.terminal_theta;
  for (double v : traj.terminal_x) {
    out << ",";
    format_number(out, v);
  }
  out << ",";
  for (std::size_t i = 0; i < m; ++i) out << ",";
  out << ",,";
  format_number(out, traj.terminal_cost);
  out << "\n";
}

void write_report_csv(std::ostream& out, const MonteCarloReport& report) {
  out << "trial,theta0,J,J_star,ratio,max_abs_state\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    out << i << "," << r.theta0 << ",";
    format_number(out, r.j);
    out << ",";
    format_number(out, r.j_star);
    out << ",";
    format_number(out, r.ratio);
    out << ",";
    format_number(out, r.max_abs_state);
    out << "\n";
  }
  auto summary = [&](const char* key, double v) {
    out << "summary," << key << ",";
    format_number(out, v);
    out << "\n";
  };
  out << "summary,trials," << report.trials << "\n";
  out << "summary,seed," << report.seed << "\n";
  summary("mean_ratio", report.mean_ratio);
  summary("std_ratio", report.std_ratio);
  summary("stderr_ratio", report.stderr_ratio);
  summary("min_ratio", report.min_ratio);
  summary("max_ratio", report.max_ratio);
  summary("max_abs_state", report.max_abs_state);
  for (std::size_t b = 0; b < report.histogram.counts.size(); ++b) {
    out << "summary,bin_" << b << ",";
    format_number(out, report.histogram.edges[b]);
    out << ":";
    format_number(out, report.histogram.edges[b + 1]);
    out << ":" << report.histogram.counts[b] << "\n";
  }
}

}  // namespace stpc
