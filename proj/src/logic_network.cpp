#include "stpc/logic_network.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "stpc/error.hpp"
#include "stpc/stp.hpp"

namespace stpc::logic {

NetworkShape::NetworkShape(std::vector<std::size_t> states,
                           std::vector<std::size_t> controls)
    : state_arities(std::move(states)), control_arities(std::move(controls)) {
  for (std::size_t k : state_arities) {
    if (k < 2) throw ConfigError("state node arity must be >= 2");
    n_ *= k;
  }
  for (std::size_t h : control_arities) {
    if (h < 1) throw ConfigError("control node arity must be >= 1");
    m_ *= h;
  }
}

std::size_t mode_index(std::span<const std::size_t> values,
                       std::span<const std::size_t> arities) {
  if (values.size() != arities.size()) {
    throw DimensionMismatch("mode_index: value/arity count mismatch");
  }
  std::size_t idx = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 1 || values[i] > arities[i]) {
      throw DimensionMismatch("logical value " + std::to_string(values[i]) +
                              " outside [1, " + std::to_string(arities[i]) +
                              "]");
    }
    idx = idx * arities[i] + (values[i] - 1);
  }
  return idx + 1;
}

std::vector<std::size_t> mode_values(std::size_t index,
                                     std::span<const std::size_t> arities) {
  std::size_t total = 1;
  for (std::size_t k : arities) total *= k;
  if (index < 1 || index > total) {
    throw DimensionMismatch("mode index " + std::to_string(index) +
                            " outside [1, " + std::to_string(total) + "]");
  }
  std::vector<std::size_t> values(arities.size());
  std::size_t rest = index - 1;
  for (std::size_t i = arities.size(); i-- > 0;) {
    values[i] = rest % arities[i] + 1;
    rest /= arities[i];
  }
  return values;
}

std::string to_string(const Expr& e) {
  switch (e.op) {
    case Expr::Op::Const:
      return e.value ? "true" : "false";
    case Expr::Op::Var:
      return (e.var.kind == Variable::Kind::State ? "t" : "g") +
             std::to_string(e.var.index);
    case Expr::Op::Not:
      return "!" + to_string(*e.lhs);
    case Expr::Op::And:
      return "(" + to_string(*e.lhs) + " & " + to_string(*e.rhs) + ")";
    case Expr::Op::Or:
      return "(" + to_string(*e.lhs) + " | " + to_string(*e.rhs) + ")";
    case Expr::Op::Xor:
      return "(" + to_string(*e.lhs) + " ^ " + to_string(*e.rhs) + ")";
    case Expr::Op::Xnor:
      return "(" + to_string(*e.lhs) + " <-> " + to_string(*e.rhs) + ")";
  }
  return "?";
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, const NetworkShape& shape)
      : text_(text), shape_(shape) {}

  ExprPtr parse() {
    ExprPtr e = equiv();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError(what, pos_ + 1);
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(std::string_view tok) {
    skip_space();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  static ExprPtr binary(Expr::Op op, ExprPtr l, ExprPtr r) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
  }

  ExprPtr equiv() {
    ExprPtr e = disj();
    while (accept("<->")) e = binary(Expr::Op::Xnor, e, disj());
    return e;
  }

  ExprPtr disj() {
    ExprPtr e = exclusive();
    while (accept("|")) e = binary(Expr::Op::Or, e, exclusive());
    return e;
  }

  ExprPtr exclusive() {
    ExprPtr e = conj();
    while (accept("^")) e = binary(Expr::Op::Xor, e, conj());
    return e;
  }

  ExprPtr conj() {
    ExprPtr e = unary();
    while (accept("&")) e = binary(Expr::Op::And, e, unary());
    return e;
  }

  ExprPtr unary() {
    if (accept("!")) {
      auto e = std::make_shared<Expr>();
      e->op = Expr::Op::Not;
      e->lhs = unary();
      return e;
    }
    if (accept("(")) {
      ExprPtr e = equiv();
      if (!accept(")")) fail("expected ')'");
      return e;
    }
    return atom();
  }

  ExprPtr atom() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) {
      if (pos_ == text_.size()) fail("unexpected end of rule");
      fail(std::string("unexpected character '") + text_[pos_] + "'");
    }
    const std::string_view word = text_.substr(start, pos_ - start);
    auto e = std::make_shared<Expr>();
    if (word == "true" || word == "false") {
      e->op = Expr::Op::Const;
      e->value = word == "true";
      return e;
    }
    const bool is_state = word.front() == 't';
    const bool is_control = word.front() == 'g';
    std::size_t number = 0;
    bool numeric = word.size() > 1;
    for (char c : word.substr(1)) {
      if (!std::isdigit(static_cast<unsigned char>(c))) numeric = false;
      else number = number * 10 + static_cast<std::size_t>(c - '0');
    }
    if (!(is_state || is_control) || !numeric) {
      throw UnknownVariable("unknown identifier '" + std::string(word) +
                            "' (expected t<i>, g<j>, true or false)");
    }
    const auto& arities =
        is_state ? shape_.state_arities : shape_.control_arities;
    if (number < 1 || number > arities.size()) {
      throw UnknownVariable("variable '" + std::string(word) +
                            "' is not declared (" +
                            std::to_string(arities.size()) + " " +
                            (is_state ? "state" : "control") + " nodes)");
    }
    if (arities[number - 1] != 2) {
      throw NonBooleanVariable("variable '" + std::string(word) +
                               "' has arity " +
                               std::to_string(arities[number - 1]) +
                               "; expressions accept Boolean nodes only");
    }
    e->op = Expr::Op::Var;
    e->var = {is_state ? Variable::Kind::State : Variable::Kind::Control,
              number};
    return e;
  }

  std::string_view text_;
  const NetworkShape& shape_;
  std::size_t pos_ = 0;
};

void check_node(const NetworkShape& shape, std::size_t node) {
  if (node < 1 || node > shape.state_count()) {
    throw DimensionMismatch("state node " + std::to_string(node) +
                            " does not exist");
  }
}

}  // namespace

UpdateRule parse_rule(std::string_view text, const NetworkShape& shape) {
  return UpdateRule{Parser(text, shape).parse(), std::string(text)};
}

UpdateRule table_rule(OutputTable table, const NetworkShape& shape,
                      std::size_t node) {
  check_node(shape, node);
  const std::size_t inputs = shape.state_dim() * shape.control_dim();
  if (table.size() != inputs) {
    throw DimensionMismatch("rule table for node " + std::to_string(node) +
                            " has " + std::to_string(table.size()) +
                            " entries, expected M*N = " +
                            std::to_string(inputs));
  }
  const std::size_t k = shape.state_arities[node - 1];
  for (std::size_t v : table) {
    if (v < 1 || v > k) {
      throw DimensionMismatch("rule table entry " + std::to_string(v) +
                              " outside [1, " + std::to_string(k) + "]");
    }
  }
  return UpdateRule{std::move(table), "<table>"};
}

UpdateRule matrix_rule(const LogicalMatrix& m, const NetworkShape& shape,
                       std::size_t node) {
  check_node(shape, node);
  if (m.rows() != shape.state_arities[node - 1]) {
    throw DimensionMismatch("structure matrix for node " +
                            std::to_string(node) + " has " +
                            std::to_string(m.rows()) + " rows");
  }
  return table_rule(m.col_indices(), shape, node);
}

bool evaluate(const Expr& e, std::span<const std::size_t> controls,
              std::span<const std::size_t> states) {
  switch (e.op) {
    case Expr::Op::Const:
      return e.value;
    case Expr::Op::Var: {
      const auto& vals =
          e.var.kind == Variable::Kind::State ? states : controls;
      return vals[e.var.index - 1] == 1;
    }
    case Expr::Op::Not:
      return !evaluate(*e.lhs, controls, states);
    case Expr::Op::And:
      return evaluate(*e.lhs, controls, states) &&
             evaluate(*e.rhs, controls, states);
    case Expr::Op::Or:
      return evaluate(*e.lhs, controls, states) ||
             evaluate(*e.rhs, controls, states);
    case Expr::Op::Xor:
      return evaluate(*e.lhs, controls, states) !=
             evaluate(*e.rhs, controls, states);
    case Expr::Op::Xnor:
      return evaluate(*e.lhs, controls, states) ==
             evaluate(*e.rhs, controls, states);
  }
  return false;
}

OutputTable truth_table(const UpdateRule& rule, const NetworkShape& shape,
                        std::size_t node) {
  check_node(shape, node);
  if (const auto* table = std::get_if<OutputTable>(&rule.form)) {
    return std::get<OutputTable>(table_rule(*table, shape, node).form);
  }
  if (shape.state_arities[node - 1] != 2) {
    throw NonBooleanVariable("node t" + std::to_string(node) +
                             " is not Boolean; give its rule as a table");
  }
  const Expr& expr = *std::get<ExprPtr>(rule.form);
  const std::size_t n = shape.state_dim();
  const std::size_t m = shape.control_dim();
  OutputTable out(n * m);
  for (std::size_t g = 1; g <= m; ++g) {
    const auto gv = mode_values(g, shape.control_arities);
    for (std::size_t t = 1; t <= n; ++t) {
      const auto tv = mode_values(t, shape.state_arities);
      out[(g - 1) * n + (t - 1)] = evaluate(expr, gv, tv) ? 1 : 2;
    }
  }
  return out;
}

LogicalMatrix node_structure_matrix(const UpdateRule& rule,
                                    const NetworkShape& shape,
                                    std::size_t node) {
  return LogicalMatrix(shape.state_arities.at(node - 1),
                       truth_table(rule, shape, node));
}

LogicalMatrix network_structure_matrix(const RuleSet& rules,
                                       const NetworkShape& shape) {
  const std::size_t n = shape.state_dim();
  const std::size_t m = shape.control_dim();
  if (rules.structure) {
    const LogicalMatrix& l = *rules.structure;
    if (l.rows() != n || l.cols() != n * m) {
      throw DimensionMismatch(
          "network structure matrix is " + std::to_string(l.rows()) + "x" +
          std::to_string(l.cols()) + ", expected " + std::to_string(n) + "x" +
          std::to_string(n * m));
    }
    return l;
  }
  if (rules.node_rules.size() != shape.state_count()) {
    throw ConfigError("expected " + std::to_string(shape.state_count()) +
                      " node rules, got " +
                      std::to_string(rules.node_rules.size()));
  }
  LogicalMatrix l = node_structure_matrix(rules.node_rules.front(), shape, 1);
  for (std::size_t i = 2; i <= shape.state_count(); ++i) {
    l = khatri_rao(l, node_structure_matrix(rules.node_rules[i - 1], shape, i));
  }
  return l;
}

void validate_distribution(std::span<const double> probabilities) {
  if (probabilities.empty()) throw BadDistribution("empty distribution");
  double sum = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw BadDistribution("probabilities must be finite and nonnegative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "probabilities sum to " << sum << ", not 1";
    throw BadDistribution(msg.str());
  }
}

LogicalNetwork::LogicalNetwork(NetworkShape shape, RuleSet rules)
    : shape_(std::move(shape)), rule_sets_{std::move(rules)},
      probabilities_{1.0} {}

LogicalNetwork::LogicalNetwork(NetworkShape shape,
                               std::vector<RuleSet> rule_sets,
                               std::vector<double> probabilities)
    : shape_(std::move(shape)),
      rule_sets_(std::move(rule_sets)),
      probabilities_(std::move(probabilities)) {
  if (rule_sets_.size() != probabilities_.size()) {
    throw BadDistribution("rule set count differs from probability count");
  }
  validate_distribution(probabilities_);
}

LogicalMatrix CompiledNetwork::stacked() const { return hconcat(structures); }

CompiledNetwork compile(const LogicalNetwork& network) {
  CompiledNetwork out;
  out.state_dim = network.shape().state_dim();
  out.control_dim = network.shape().control_dim();
  for (std::size_t i = 0; i < network.rule_set_count(); ++i) {
    out.structures.push_back(
        network_structure_matrix(network.rule_set(i), network.shape()));
  }
  out.probabilities = network.probabilities();
  return out;
}

CanonicalVector step_logical(const LogicalMatrix& l,
                             const CanonicalVector& gamma,
                             const CanonicalVector& theta) {
  const std::size_t n = l.rows();
  if (theta.dim != n || gamma.dim * n != l.cols()) {
    throw DimensionMismatch("step_logical: L is " + std::to_string(l.rows()) +
                            "x" + std::to_string(l.cols()) + ", gamma in Δ" +
                            std::to_string(gamma.dim) + ", theta in Δ" +
                            std::to_string(theta.dim));
  }
  return CanonicalVector(n, l.index((gamma.index - 1) * n + theta.index - 1));
}

}  // namespace stpc::logic
