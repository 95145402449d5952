#include "stpc/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "stpc/cli/config.hpp"
#include "stpc/codesign_det.hpp"
#include "stpc/codesign_stoch.hpp"
#include "stpc/error.hpp"
#include "stpc/riccati.hpp"
#include "stpc/simulator.hpp"

namespace stpc::cli {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void print_matrix(std::ostream& out, const Matrix& m, const char* indent) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out << indent;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      out << (j ? " " : "") << num(m(i, j));
    }
    out << "\n";
  }
}

void print_logical(std::ostream& out, const std::string& name,
                   const LogicalMatrix& l) {
  out << name << " (" << l.rows() << "x" << l.cols() << ") columns: [";
  for (std::size_t j = 0; j < l.cols(); ++j) {
    out << (j ? "," : "") << l.index(j);
  }
  out << "]\n";
  const Matrix d = l.dense();
  for (std::size_t i = 0; i < d.rows(); ++i) {
    out << "  ";
    for (std::size_t j = 0; j < d.cols(); ++j) {
      out << (j ? " " : "") << static_cast<int>(d(i, j));
    }
    out << "\n";
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path);
  return f;
}

void print_sequence(std::ostream& out, const std::vector<std::size_t>& seq) {
  for (std::size_t i = 0; i < seq.size(); ++i) out << (i ? " " : "") << seq[i];
  out << "\n";
}

struct CommonOptions {
  std::string config;
  std::optional<std::size_t> theta;
  std::vector<double> x;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_state) {
  cmd->add_option("config", o.config, "problem configuration (JSON)")
      ->required();
  if (with_state) {
    cmd->add_option("--theta", o.theta, "initial logical state (one-based)");
    cmd->add_option("--x", o.x, "initial continuous state")->delimiter(',');
  }
  cmd->add_option("--out", o.out, "output file");
}

HybridState resolve_state(const ProblemConfig& cfg, const CommonOptions& o) {
  std::optional<HybridState> s = cfg.initial_state;
  if (!o.theta && o.x.empty()) {
    if (!s) {
      throw ConfigError("no initial state: pass --theta and --x or set "
                        "initial_state in the config");
    }
    return *s;
  }
  HybridState out = s.value_or(
      HybridState{CanonicalVector(cfg.shape.state_dim(), 1),
                  std::vector<double>(cfg.n, 0.0)});
  if (o.theta) {
    if (*o.theta < 1 || *o.theta > cfg.shape.state_dim()) {
      throw ConfigError("--theta must be in [1, " +
                        std::to_string(cfg.shape.state_dim()) + "]");
    }
    out.theta = CanonicalVector(cfg.shape.state_dim(), *o.theta);
  }
  if (!o.x.empty()) {
    if (o.x.size() != cfg.n) {
      throw ConfigError("--x needs " + std::to_string(cfg.n) + " values");
    }
    out.x = o.x;
  }
  return out;
}

AugmentedSystem deterministic_system(const ProblemConfig& cfg) {
  return build_deterministic(cfg.compiled.structures.front(),
                             cfg.plant.without_noise());
}

AugmentedSystem stochastic_system(const ProblemConfig& cfg) {
  if (!cfg.compiled_stochastic) {
    throw ConfigError("this command needs a logic.stochastic block");
  }
  return build_stochastic(cfg.compiled_stochastic->structures,
                          cfg.compiled_stochastic->probabilities, cfg.plant);
}

void write_tree(const std::string& path, const SolutionTree& tree) {
  auto f = open_output(path);
  dump_tree(f, tree);
}

// compile ------------------------------------------------------------------

int cmd_compile(const CommonOptions& o, std::ostream& out) {
  const ProblemConfig cfg = load_config(o.config);
  out << "N = " << cfg.compiled.state_dim << ", M = " << cfg.compiled.control_dim
      << "\n";
  print_logical(out, "L", cfg.compiled.structures.front());
  if (cfg.compiled_stochastic) {
    const auto& cs = *cfg.compiled_stochastic;
    for (std::size_t i = 0; i < cs.structures.size(); ++i) {
      print_logical(out, "L" + std::to_string(i + 1) + " p=" +
                             num(cs.probabilities[i]),
                    cs.structures[i]);
    }
  }
  if (!o.out.empty()) {
    // Same problem with every rule replaced by its structure matrix.
    std::ifstream in(o.config);
    nlohmann::json doc = nlohmann::json::parse(in);
    auto& logic = doc["logic"];
    logic.erase("rules");
    logic["structure"] = cfg.compiled.structures.front().col_indices();
    if (cfg.compiled_stochastic) {
      nlohmann::json sets = nlohmann::json::array();
      for (const auto& l : cfg.compiled_stochastic->structures) {
        sets.push_back({{"structure", l.col_indices()}});
      }
      logic["stochastic"]["rule_sets"] = sets;
    }
    auto f = open_output(o.out);
    f << doc.dump(2) << "\n";
  }
  return kOk;
}

// solve-det / solve-stoch -------------------------------------------------

int cmd_solve_det(const CommonOptions& o, const std::string& dump,
                  std::ostream& out) {
  const ProblemConfig cfg = load_config(o.config);
  const HybridState s0 = resolve_state(cfg, o);
  const AugmentedSystem sys = deterministic_system(cfg);
  const SolutionTree tree = precompute_tree(sys, cfg.horizon, cfg.solver);
  const Policy p = make_policy(tree, sys, s0);
  out << "sequence: ";
  print_sequence(out, p.sequence);
  out << "J_min: " << num(p.j_min) << "\n";
  for (std::size_t t = 0; t < p.gains.size(); ++t) {
    out << "gain t=" << t << " (" << p.gains[t].rows() << "x"
        << p.gains[t].cols() << "):\n";
    print_matrix(out, p.gains[t], "  ");
  }
  const std::string path = dump.empty() ? cfg.output.tree : dump;
  if (!path.empty()) write_tree(path, tree);
  return kOk;
}

int cmd_solve_stoch(const CommonOptions& o, const std::string& dump,
                    std::ostream& out) {
  const ProblemConfig cfg = load_config(o.config);
  const HybridState s0 = resolve_state(cfg, o);
  if (cfg.horizon == 0) throw ConfigError("solve-stoch needs horizon >= 1");
  const AugmentedSystem sys = stochastic_system(cfg);
  const SolutionTree tree = precompute_stochastic(sys, cfg.horizon, cfg.solver);
  const RecedingDecision d = receding_step(tree, sys, 0, s0);
  out << "suffix: ";
  print_sequence(out, tree.sequence(0, d.index));
  out << "gamma_0: " << d.gamma << "\n";
  out << "predicted_cost: " << num(d.predicted_cost) << "\n";
  out << "gain t=0 (" << d.gain.rows() << "x" << d.gain.cols() << "):\n";
  print_matrix(out, d.gain, "  ");
  const std::string path = dump.empty() ? cfg.output.tree : dump;
  if (!path.empty()) write_tree(path, tree);
  return kOk;
}

// simulate / montecarlo ---------------------------------------------------

int cmd_simulate(const CommonOptions& o, std::optional<std::uint64_t> seed,
                 bool stochastic, std::ostream& out) {
  const ProblemConfig cfg = load_config(o.config);
  const HybridState s0 = resolve_state(cfg, o);
  Trajectory traj;
  std::optional<double> j_min;
  if (stochastic) {
    const AugmentedSystem sys = stochastic_system(cfg);
    const SolutionTree tree =
        precompute_stochastic(sys, cfg.horizon, cfg.solver);
    traj = rollout_stochastic(cfg.plant, sys, tree, s0,
                              seed.value_or(cfg.montecarlo.seed),
                              cfg.montecarlo.sim_horizon);
  } else {
    const Policy p = solve(cfg.plant, cfg.compiled, cfg.horizon, s0, cfg.solver);
    j_min = p.j_min;
    traj = rollout_deterministic(cfg.plant, cfg.compiled, p, s0);
  }
  const std::string path = o.out.empty() ? cfg.output.trajectory : o.out;
  if (path.empty()) {
    write_trajectory_csv(out, traj);
    return kOk;
  }
  auto f = open_output(path);
  write_trajectory_csv(f, traj);
  if (j_min) out << "J_min: " << num(*j_min) << "\n";
  out << "total_cost: " << num(traj.total_cost) << "\n";
  out << "trajectory: " << path << "\n";
  return kOk;
}

int cmd_montecarlo(const CommonOptions& o, std::optional<std::size_t> trials,
                   std::optional<std::uint64_t> seed, std::ostream& out) {
  const ProblemConfig cfg = load_config(o.config);
  MonteCarloConfig mc = cfg.montecarlo;
  if (trials) {
    if (*trials == 0) throw ConfigError("--trials must be >= 1");
    mc.trials = *trials;
  }
  if (seed) mc.seed = *seed;
  const AugmentedSystem sys = stochastic_system(cfg);
  const SolutionTree tree = precompute_stochastic(sys, cfg.horizon, cfg.solver);
  const MonteCarloReport rep = monte_carlo(cfg.plant, sys, tree, mc);
  const std::string path = o.out.empty() ? cfg.output.report : o.out;
  if (path.empty()) {
    write_report_csv(out, rep);
    return kOk;
  }
  auto f = open_output(path);
  write_report_csv(f, rep);
  out << "trials: " << rep.trials << "\n";
  out << "mean_ratio: " << num(rep.mean_ratio) << "\n";
  out << "stderr_ratio: " << num(rep.stderr_ratio) << "\n";
  out << "min_ratio: " << num(rep.min_ratio) << "\n";
  out << "max_ratio: " << num(rep.max_ratio) << "\n";
  out << "max_abs_state: " << num(rep.max_abs_state) << "\n";
  out << "report: " << path << "\n";
  return kOk;
}

// verify ------------------------------------------------------------------

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass() const { return value <= tolerance; }
};

double rel(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-12);
}

double tree_drift(const SolutionTree& a, const SolutionTree& b) {
  double d = 0.0;
  for (std::size_t t = 0; t <= a.horizon(); ++t) {
    for (std::size_t i = 0; i < a.stage_size(t); ++i) {
      d = std::max(d, max_abs_diff(a.entry(t, i).k, b.entry(t, i).k));
      if (t < a.horizon()) {
        d = std::max(d, max_abs_diff(a.entry(t, i).gain, b.entry(t, i).gain));
      }
    }
  }
  return d;
}

std::vector<HybridState> verify_states(const ProblemConfig& cfg,
                                       const std::optional<HybridState>& given) {
  std::vector<HybridState> states;
  if (given) states.push_back(*given);
  Rng rng(cfg.montecarlo.seed);
  for (int k = 0; k < 5; ++k) {
    HybridState s{CanonicalVector(cfg.shape.state_dim(),
                                  rng.below(cfg.shape.state_dim()) + 1),
                  std::vector<double>(cfg.n)};
    for (double& xi : s.x) {
      xi = rng.uniform(cfg.montecarlo.x0_low, cfg.montecarlo.x0_high);
    }
    states.push_back(std::move(s));
  }
  return states;
}

int cmd_verify(const CommonOptions& o, double perturb, std::ostream& out) {
  const ProblemConfig cfg = load_config(o.config);
  std::optional<HybridState> given;
  if (o.theta || !o.x.empty() || cfg.initial_state) given = resolve_state(cfg, o);
  const std::size_t T = cfg.horizon;
  const AugmentedSystem sys = deterministic_system(cfg);
  SolutionTree tree = precompute_tree(sys, T, cfg.solver);
  if (perturb != 0.0) {
    for (std::size_t i = 0; i < tree.stage_size(0); ++i) {
      tree.entry(0, i).k += Matrix::identity(sys.state_size()) * perturb;
    }
  }

  std::vector<Check> checks;
  const LogicalMatrix& l = cfg.compiled.structures.front();
  Check triangle{"oracle_triangle", 0.0, 1e-9};
  Check optimal{"optimal_selection", 0.0, 1e-9};
  for (const HybridState& s : verify_states(cfg, given)) {
    const std::vector<double> v = pack(s);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tree.stage_size(0); ++i) {
      const auto seq = tree.sequence(0, i);
      const double riccati = half_quadratic_form(tree.entry(0, i).k, v);
      const double oracle = oracle_per_mode_lqr(cfg.plant, l, seq, s).j;
      Policy p;
      p.sequence = seq;
      for (const Matrix& g : tree.gains(0, i)) {
        p.gains.push_back(reduce_gain(g, sys.N, sys.m));
      }
      const double sim = rollout_deterministic(cfg.plant, cfg.compiled, p, s)
                             .total_cost;
      triangle.value = std::max({triangle.value, rel(riccati, oracle),
                                 rel(sim, oracle)});
      best = std::min(best, oracle);
    }
    const Selection sel = select_sequence(tree, 0, v);
    optimal.value = std::max(optimal.value, rel(sel.cost, best));
  }
  checks.push_back(triangle);
  checks.push_back(optimal);

  Check bellman{"bellman_consistency", 0.0, 1e-12};
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < tree.stage_size(t); ++i) {
      const std::size_t gamma = tree.sequence(t, i).front();
      const Matrix& k_next = tree.entry(t + 1, tree.tail(t, i)).k;
      const Matrix g = riccati_gain(k_next, gamma, sys);
      const Matrix k = riccati_cost(k_next, gamma, g, sys);
      const double scale = std::max(1.0, max_abs(k));
      bellman.value = std::max(
          bellman.value, max_abs_diff(k, tree.entry(t, i).k) / scale);
    }
  }
  checks.push_back(bellman);

  if (cfg.compiled_stochastic) {
    const auto& cs = *cfg.compiled_stochastic;
    const SwitchedPlant silent = cfg.plant.with_noise_scale(0.0);
    const LogicalMatrix first = cs.structures.front();
    const double one = 1.0;
    const AugmentedSystem degenerate = build_stochastic(
        std::span<const LogicalMatrix>(&first, 1),
        std::span<const double>(&one, 1), silent);
    const SolutionTree dt = precompute_stochastic(degenerate, T, cfg.solver);
    const AugmentedSystem det_first = build_deterministic(first, silent.without_noise());
    Check degen{"degeneration_deterministic", 0.0, 1e-12};
    degen.value = tree_drift(dt, precompute_tree(det_first, T, cfg.solver));
    checks.push_back(degen);

    const AugmentedSystem base = stochastic_system(cfg);
    const SolutionTree bt = precompute_stochastic(base, T, cfg.solver);
    Check gains{"noise_gain_invariance", 0.0, 1e-12};
    Check constants{"noise_constant_scaling", 0.0, 1e-9};
    for (double factor : {0.0, 0.5, 10.0}) {
      const AugmentedSystem scaled = build_stochastic(
          cs.structures, cs.probabilities, cfg.plant.with_noise_scale(factor));
      const SolutionTree st = precompute_stochastic(scaled, T, cfg.solver);
      gains.value = std::max(gains.value, tree_drift(st, bt));
      for (std::size_t t = 0; t <= T; ++t) {
        for (std::size_t i = 0; i < st.stage_size(t); ++i) {
          const auto& cb = bt.entry(t, i).c;
          const auto& cc = st.entry(t, i).c;
          for (std::size_t k = 0; k < cb.size(); ++k) {
            const double want = factor * factor * cb[k];
            constants.value = std::max(
                constants.value,
                std::abs(cc[k] - want) / std::max(1.0, std::abs(want)));
          }
        }
      }
    }
    checks.push_back(gains);
    checks.push_back(constants);

    if (cs.control_dim == 1) {
      Check mjls{"mjls_oracle", 0.0, 1e-9};
      for (const HybridState& s : verify_states(cfg, given)) {
        const MjlsOracleResult oracle =
            oracle_mjls(cfg.plant, cs.structures, cs.probabilities, T, s);
        mjls.value = std::max(mjls.value,
                              rel(expected_total_cost(bt, s, 0), oracle.j));
        for (std::size_t t = 0; t < T; ++t) {
          const TreeEntry& e = bt.entry(t, 0);
          for (std::size_t th = 0; th < base.N; ++th) {
            const Matrix g =
                e.gain.block(th * base.m, th * base.n, base.m, base.n);
            const Matrix k =
                e.k.block(th * base.n, th * base.n, base.n, base.n);
            const Matrix& og = oracle.gains[t][th];
            const Matrix& ok = oracle.costs[t][th];
            mjls.value = std::max(
                {mjls.value, max_abs_diff(g, og) / std::max(1.0, max_abs(og)),
                 max_abs_diff(k, ok) / std::max(1.0, max_abs(ok))});
          }
        }
      }
      checks.push_back(mjls);
    }
  }

  std::size_t passed = 0;
  for (const Check& c : checks) {
    out << (c.pass() ? "PASS " : "FAIL ") << c.name
        << " max_discrepancy=" << num(c.value) << " tol=" << num(c.tolerance)
        << "\n";
    if (c.pass()) ++passed;
  }
  out << "verify: " << passed << "/" << checks.size() << " checks passed\n";
  return passed == checks.size() ? kOk : kNumericalError;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Co-design of logical and continuous controls for switched "
               "linear systems", "stpc"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  CommonOptions o;
  std::string dump;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  bool stochastic = false;
  double perturb = 0.0;

  auto* compile = app.add_subcommand("compile", "print structure matrices");
  add_common(compile, o, false);
  auto* solve_det = app.add_subcommand("solve-det", "deterministic co-design");
  add_common(solve_det, o, true);
  solve_det->add_option("--dump-tree", dump, "write the solution tree");
  auto* solve_stoch =
      app.add_subcommand("solve-stoch", "stochastic co-design, first step");
  add_common(solve_stoch, o, true);
  solve_stoch->add_option("--dump-tree", dump, "write the solution tree");
  auto* simulate = app.add_subcommand("simulate", "closed-loop trajectory CSV");
  add_common(simulate, o, true);
  simulate->add_option("--seed", seed, "random seed (stochastic)");
  simulate->add_flag("--stochastic", stochastic, "receding-horizon rollout");
  auto* montecarlo = app.add_subcommand("montecarlo", "Monte-Carlo report CSV");
  add_common(montecarlo, o, false);
  montecarlo->add_option("--trials", trials, "number of trials");
  montecarlo->add_option("--seed", seed, "master seed");
  auto* verify = app.add_subcommand("verify", "oracle agreement checks");
  add_common(verify, o, true);
  verify->add_option("--perturb", perturb,
                     "add this multiple of I to every stage-0 K (negative "
                     "control)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  if (*compile) return cmd_compile(o, out);
  if (*solve_det) return cmd_solve_det(o, dump, out);
  if (*solve_stoch) return cmd_solve_stoch(o, dump, out);
  if (*simulate) return cmd_simulate(o, seed, stochastic, out);
  if (*montecarlo) return cmd_montecarlo(o, trials, seed, out);
  if (*verify) return cmd_verify(o, perturb, out);
  return kConfigError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const NotPositiveDefinite& e) {
    err << "numerical guard: " << e.what() << "\n";
    return kNumericalError;
  } catch (const NonFiniteValue& e) {
    err << "numerical guard: " << e.what() << "\n";
    return kNumericalError;
  } catch (const AmbiguousBlock& e) {
    err << "numerical guard: " << e.what() << "\n";
    return kNumericalError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace stpc::cli
