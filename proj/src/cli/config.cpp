#include "stpc/cli/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "stpc/error.hpp"

namespace stpc::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

const json& require(const json& obj, const std::string& key,
                    const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, "missing key \"" + key + "\"");
  return *it;
}

const json* optional_key(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

std::size_t as_count(const json& v, const std::string& where,
                     std::size_t min_value = 0) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    fail(where, "expected a nonnegative integer");
  }
  const auto n = v.get<std::size_t>();
  if (n < min_value) {
    fail(where, "must be at least " + std::to_string(min_value));
  }
  return n;
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

std::vector<std::size_t> as_count_list(const json& v, const std::string& where,
                                       std::size_t min_value = 0) {
  if (!v.is_array()) fail(where, "expected an array of integers");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_count(v[i], where + "[" + std::to_string(i) + "]",
                           min_value));
  }
  return out;
}

Matrix as_matrix(const json& v, std::size_t rows, std::size_t cols,
                 const std::string& where) {
  if (!v.is_array() || v.size() != rows) {
    fail(where, "expected " + std::to_string(rows) + " rows of " +
                    std::to_string(cols) + " numbers");
  }
  Matrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string row_where = where + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || v[i].size() != cols) {
      fail(row_where, "expected " + std::to_string(cols) + " numbers");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      out(i, j) = as_number(v[i][j], row_where + "[" + std::to_string(j) + "]");
    }
  }
  return out;
}

logic::UpdateRule parse_node_rule(const json& v, const logic::NetworkShape& shape,
                                  std::size_t node, const std::string& where) {
  try {
    if (v.is_string()) {
      return logic::parse_rule(v.get<std::string>(), shape);
    }
    if (v.is_object() && v.contains("table")) {
      return logic::table_rule(as_count_list(v["table"], where + ".table", 1),
                               shape, node);
    }
    if (v.is_object() && v.contains("matrix")) {
      const json& mj = v["matrix"];
      const std::size_t rows = shape.state_arities.at(node - 1);
      const std::size_t cols = shape.state_dim() * shape.control_dim();
      return logic::matrix_rule(
          LogicalMatrix::from_dense(as_matrix(mj, rows, cols, where + ".matrix")),
          shape, node);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(where, e.what());
  }
  fail(where, "expected a rule string, {\"table\": [...]} or "
              "{\"matrix\": [[...]]}");
}

// Either an array of node rules, {"rules": [...]}, or {"structure": [...]}
// holding the one-based column indices of L.
logic::RuleSet parse_rule_set(const json& v, const logic::NetworkShape& shape,
                              const std::string& where) {
  logic::RuleSet set;
  const json* rules = v.is_array() ? &v : nullptr;
  if (v.is_object()) {
    if (const json* s = optional_key(v, "structure")) {
      const auto idx = as_count_list(*s, where + ".structure", 1);
      try {
        set.structure = LogicalMatrix(shape.state_dim(), idx);
        logic::network_structure_matrix(set, shape);
      } catch (const Error& e) {
        fail(where + ".structure", e.what());
      }
      return set;
    }
    rules = optional_key(v, "rules");
  }
  if (rules == nullptr || !rules->is_array()) {
    fail(where, "expected an array of node rules or a \"structure\" entry");
  }
  const std::string rules_where = v.is_array() ? where : where + ".rules";
  for (std::size_t i = 0; i < shape.state_count(); ++i) {
    if (i >= rules->size()) {
      fail(rules_where, "no rule for state node t" + std::to_string(i + 1));
    }
    set.node_rules.push_back(parse_node_rule(
        (*rules)[i], shape, i + 1,
        rules_where + "[" + std::to_string(i) + "]"));
  }
  if (rules->size() > shape.state_count()) {
    fail(rules_where, "more rules than state nodes (" +
                          std::to_string(shape.state_count()) + ")");
  }
  return set;
}

std::vector<double> as_vector(const json& v, std::size_t size,
                              const std::string& where) {
  if (!v.is_array() || v.size() != size) {
    fail(where, "expected " + std::to_string(size) + " numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < size; ++i) {
    out.push_back(as_number(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

ProblemConfig parse_config(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ": " + e.what());
  }
  if (!doc.is_object()) fail(source, "top level must be an object");

  const json& dims = require(doc, "dimensions", source);
  const std::size_t n = as_count(require(dims, "n", "dimensions"), "dimensions.n", 1);
  const std::size_t m = as_count(require(dims, "m", "dimensions"), "dimensions.m", 1);
  std::size_t r = 0;
  if (const json* rj = optional_key(dims, "r")) r = as_count(*rj, "dimensions.r");

  const json& lj = require(doc, "logic", source);
  logic::NetworkShape shape;
  try {
    shape = logic::NetworkShape(
        as_count_list(require(lj, "state_arities", "logic"), "logic.state_arities"),
        as_count_list(require(lj, "control_arities", "logic"),
                      "logic.control_arities"));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail("logic", e.what());
  }
  logic::RuleSet main_rules;
  if (optional_key(lj, "structure")) {
    main_rules = parse_rule_set(json{{"structure", lj["structure"]}}, shape, "logic");
  } else {
    main_rules = parse_rule_set(require(lj, "rules", "logic"), shape, "logic.rules");
  }
  logic::LogicalNetwork network(shape, main_rules);

  std::optional<logic::LogicalNetwork> stochastic;
  if (const json* sj = optional_key(lj, "stochastic")) {
    const json& sets = require(*sj, "rule_sets", "logic.stochastic");
    if (!sets.is_array() || sets.empty()) {
      fail("logic.stochastic.rule_sets", "expected a nonempty array");
    }
    std::vector<logic::RuleSet> rule_sets;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      rule_sets.push_back(parse_rule_set(
          sets[i], shape, "logic.stochastic.rule_sets[" + std::to_string(i) + "]"));
    }
    const auto probs = as_vector(require(*sj, "probabilities", "logic.stochastic"),
                                 sets.size(), "logic.stochastic.probabilities");
    stochastic.emplace(shape, std::move(rule_sets), probs);
  }

  const json& modes = require(doc, "modes", source);
  if (!modes.is_array() || modes.size() != shape.state_dim()) {
    fail("modes", "expected " + std::to_string(shape.state_dim()) +
                      " entries (N from the state arities)");
  }
  std::vector<ModeDynamics> dyn;
  std::vector<ModeWeights> weights;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const std::string w = "modes[" + std::to_string(i) + "]";
    const json& mj = modes[i];
    ModeDynamics d{as_matrix(require(mj, "A", w), n, n, w + ".A"),
                   as_matrix(require(mj, "B", w), n, m, w + ".B"), Matrix()};
    if (r > 0) d.f = as_matrix(require(mj, "F", w), n, r, w + ".F");
    dyn.push_back(std::move(d));
    weights.push_back(ModeWeights{as_matrix(require(mj, "C", w), n, n, w + ".C"),
                                  as_matrix(require(mj, "D", w), m, m, w + ".D"),
                                  as_matrix(require(mj, "Q", w), n, n, w + ".Q")});
  }
  if (stochastic && r == 0) {
    fail("dimensions.r", "the stochastic block needs noise matrices (r >= 1)");
  }

  const std::size_t horizon = as_count(require(doc, "horizon", source), "horizon");

  SolverOptions solver;
  if (const json* sj = optional_key(doc, "solver")) {
    if (const json* cap = optional_key(*sj, "max_sequences")) {
      solver.max_sequences = as_count(*cap, "solver.max_sequences", 1);
    }
  }

  MonteCarloConfig mc;
  mc.sim_horizon = horizon;
  if (const json* mj = optional_key(doc, "montecarlo")) {
    if (const json* v = optional_key(*mj, "trials")) {
      mc.trials = as_count(*v, "montecarlo.trials", 1);
    }
    if (const json* v = optional_key(*mj, "x0_low")) {
      mc.x0_low = as_number(*v, "montecarlo.x0_low");
    }
    if (const json* v = optional_key(*mj, "x0_high")) {
      mc.x0_high = as_number(*v, "montecarlo.x0_high");
    }
    if (const json* v = optional_key(*mj, "seed")) {
      if (!v->is_number_unsigned()) fail("montecarlo.seed", "expected an unsigned integer");
      mc.seed = v->get<std::uint64_t>();
    }
    if (const json* v = optional_key(*mj, "sim_horizon")) {
      mc.sim_horizon = as_count(*v, "montecarlo.sim_horizon", 1);
    }
    if (const json* v = optional_key(*mj, "histogram_bins")) {
      mc.histogram_bins = as_count(*v, "montecarlo.histogram_bins", 1);
    }
    if (mc.x0_low > mc.x0_high) fail("montecarlo", "x0_low exceeds x0_high");
  }

  std::optional<HybridState> initial;
  if (const json* ij = optional_key(doc, "initial_state")) {
    const std::size_t theta =
        as_count(require(*ij, "theta", "initial_state"), "initial_state.theta", 1);
    if (theta > shape.state_dim()) {
      fail("initial_state.theta", "must be in [1, " +
                                      std::to_string(shape.state_dim()) + "]");
    }
    initial = HybridState{CanonicalVector(shape.state_dim(), theta),
                          as_vector(require(*ij, "x", "initial_state"), n,
                                    "initial_state.x")};
  }

  OutputPaths out;
  if (const json* oj = optional_key(doc, "output")) {
    auto str = [&](const char* key, std::string& dst) {
      if (const json* v = optional_key(*oj, key)) {
        if (!v->is_string()) fail(std::string("output.") + key, "expected a path");
        dst = v->get<std::string>();
      }
    };
    str("trajectory", out.trajectory);
    str("report", out.report);
    str("tree", out.tree);
  }

  logic::CompiledNetwork compiled = logic::compile(network);
  std::optional<logic::CompiledNetwork> compiled_stochastic;
  if (stochastic) compiled_stochastic = logic::compile(*stochastic);

  SwitchedPlant plant = [&] {
    try {
      return SwitchedPlant(std::move(dyn), std::move(weights));
    } catch (const Error& e) {
      fail("modes", e.what());
    }
  }();

  return ProblemConfig{.n = n,
                       .m = m,
                       .r = r,
                       .shape = shape,
                       .network = std::move(network),
                       .stochastic_network = std::move(stochastic),
                       .compiled = std::move(compiled),
                       .compiled_stochastic = std::move(compiled_stochastic),
                       .plant = std::move(plant),
                       .horizon = horizon,
                       .solver = solver,
                       .montecarlo = mc,
                       .initial_state = std::move(initial),
                       .output = std::move(out)};
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace stpc::cli
