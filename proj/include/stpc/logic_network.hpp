#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stpc/matrix.hpp"

// Logical (Boolean / multi-valued) control networks: rule parsing, truth
// tables and structure-matrix compilation.
//
// Logical values are one-based: value v of a k-valued node is δ_k^v, and for
// Boolean nodes 1 = TRUE, 2 = FALSE. Inputs are ordered controls first, then
// states (γ ⋉ θ), each group in declaration order.
namespace stpc::logic {

struct NetworkShape {
  std::vector<std::size_t> state_arities;    // k_1..k_p, each >= 2
  std::vector<std::size_t> control_arities;  // h_1..h_q, each >= 1

  NetworkShape() = default;
  NetworkShape(std::vector<std::size_t> states, std::vector<std::size_t> controls);

  std::size_t state_count() const { return state_arities.size(); }
  std::size_t control_count() const { return control_arities.size(); }
  // N = Π k_i, M = Π h_j (1 for an empty product).
  std::size_t state_dim() const { return n_; }
  std::size_t control_dim() const { return m_; }

 private:
  std::size_t n_ = 1;
  std::size_t m_ = 1;
};

// ι(values) = Σ (v_i - 1) Π_{j>i} k_j + 1
std::size_t mode_index(std::span<const std::size_t> values,
                       std::span<const std::size_t> arities);
// Inverse of mode_index.
std::vector<std::size_t> mode_values(std::size_t index,
                                     std::span<const std::size_t> arities);

struct Variable {
  enum class Kind { State, Control };
  Kind kind;
  std::size_t index;  // one-based node number
  bool operator==(const Variable&) const = default;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Op { Const, Var, Not, And, Or, Xor, Xnor };
  Op op;
  bool value = false;  // Const
  Variable var{Variable::Kind::State, 0};
  ExprPtr lhs;  // Not uses lhs only
  ExprPtr rhs;
};

std::string to_string(const Expr& e);

// Output value (one-based) per input column, length M·N.
using OutputTable = std::vector<std::size_t>;

struct UpdateRule {
  std::variant<ExprPtr, OutputTable> form;
  std::string source;
};

// Grammar, loosest binding first:
//   equiv := or ( "<->" or )*
//   or    := xor ( "|" xor )*
//   xor   := and ( "^" and )*
//   and   := unary ( "&" unary )*
//   unary := "!" unary | "(" equiv ")" | t<i> | g<j> | true | false
// `^` is XOR and `<->` is XNOR. Every referenced node must be Boolean.
UpdateRule parse_rule(std::string_view text, const NetworkShape& shape);

// Explicit rule from an output table (entries in [1, k_node]).
UpdateRule table_rule(OutputTable table, const NetworkShape& shape,
                      std::size_t node);
// Explicit rule from a k_node × MN logical matrix.
UpdateRule matrix_rule(const LogicalMatrix& m, const NetworkShape& shape,
                       std::size_t node);

// Evaluates an expression with one-based logical values.
bool evaluate(const Expr& e, std::span<const std::size_t> controls,
              std::span<const std::size_t> states);

// Output per input combination, in γ ⋉ θ lexicographic order. `node` is
// one-based and fixes the output arity.
OutputTable truth_table(const UpdateRule& rule, const NetworkShape& shape,
                        std::size_t node);

// M_{f^i} ∈ L_{k_i × MN}.
LogicalMatrix node_structure_matrix(const UpdateRule& rule,
                                    const NetworkShape& shape,
                                    std::size_t node);

// One rule per state node, or an explicit network structure matrix.
struct RuleSet {
  std::vector<UpdateRule> node_rules;
  std::optional<LogicalMatrix> structure;
};

// L = M_{f^1} * ... * M_{f^p} ∈ L_{N × MN}.
LogicalMatrix network_structure_matrix(const RuleSet& rules,
                                       const NetworkShape& shape);

// A deterministic network has one rule set with probability 1; a stochastic
// one has ℓ rule sets selected i.i.d. with the given probabilities.
class LogicalNetwork {
 public:
  LogicalNetwork(NetworkShape shape, RuleSet rules);
  LogicalNetwork(NetworkShape shape, std::vector<RuleSet> rule_sets,
                 std::vector<double> probabilities);

  const NetworkShape& shape() const { return shape_; }
  std::size_t rule_set_count() const { return rule_sets_.size(); }
  const RuleSet& rule_set(std::size_t i) const { return rule_sets_.at(i); }
  const std::vector<double>& probabilities() const { return probabilities_; }

 private:
  NetworkShape shape_;
  std::vector<RuleSet> rule_sets_;
  std::vector<double> probabilities_;
};

struct CompiledNetwork {
  std::size_t state_dim = 1;    // N
  std::size_t control_dim = 1;  // M
  std::vector<LogicalMatrix> structures;  // L_1..L_ℓ, each N × MN
  std::vector<double> probabilities;

  // L̃ = [L_1 ... L_ℓ]
  LogicalMatrix stacked() const;
};

CompiledNetwork compile(const LogicalNetwork& network);

// Throws BadDistribution unless probabilities are nonnegative and sum to 1
// within 1e-12.
void validate_distribution(std::span<const double> probabilities);

// θ⃗_{t+1} = L ⋉ γ⃗ ⋉ θ⃗
CanonicalVector step_logical(const LogicalMatrix& l, const CanonicalVector& gamma,
                             const CanonicalVector& theta);

}  // namespace stpc::logic
