#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "stpc/error.hpp"
#include "stpc/logic_network.hpp"

namespace stpc::logic {
namespace {

NetworkShape two_by_one() { return NetworkShape({2, 2}, {2}); }

RuleSet rules(const NetworkShape& shape, std::initializer_list<const char*> text) {
  RuleSet set;
  for (const char* t : text) set.node_rules.push_back(parse_rule(t, shape));
  return set;
}

TEST(ModeIndex, ControlsOutermostLexicographic) {
  const std::vector<std::size_t> ar{2, 3};
  const std::vector<std::size_t> v{2, 1};
  EXPECT_EQ(mode_index(v, ar), 4u);  // (2-1)*3 + 1
  for (std::size_t i = 1; i <= 6; ++i) {
    EXPECT_EQ(mode_index(mode_values(i, ar), ar), i);
  }
}

TEST(Parser, PrecedenceAndAssociativity) {
  const auto shape = two_by_one();
  // & binds tighter than |: t1 | t2 & g1 == t1 | (t2 & g1)
  const auto a = truth_table(parse_rule("t1 | t2 & g1", shape), shape, 1);
  const auto b = truth_table(parse_rule("t1 | (t2 & g1)", shape), shape, 1);
  EXPECT_EQ(a, b);
  // <-> binds loosest.
  EXPECT_EQ(truth_table(parse_rule("g1 <-> t1 ^ t2", shape), shape, 1),
            truth_table(parse_rule("g1 <-> (t1 ^ t2)", shape), shape, 1));
  EXPECT_EQ(truth_table(parse_rule("!!t1", shape), shape, 1),
            truth_table(parse_rule("t1", shape), shape, 1));
  EXPECT_EQ(truth_table(parse_rule("true", shape), shape, 1),
            OutputTable(8, 1));
}

TEST(Parser, Errors) {
  const auto shape = two_by_one();
  try {
    parse_rule("t1 & (t2", shape);
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_GE(e.position(), 1u);
  }
  EXPECT_THROW(parse_rule("t1 & & t2", shape), SyntaxError);
  EXPECT_THROW(parse_rule("t3", shape), UnknownVariable);
  EXPECT_THROW(parse_rule("g2", shape), UnknownVariable);
  EXPECT_THROW(parse_rule("x1", shape), UnknownVariable);
  const NetworkShape ternary({3, 2}, {2});
  EXPECT_THROW(parse_rule("t1 & g1", ternary), NonBooleanVariable);
}

TEST(Evaluate, OneIsTrue) {
  const auto shape = two_by_one();
  const auto r = parse_rule("t1 & !t2", shape);
  const auto& e = *std::get<ExprPtr>(r.form);
  const std::size_t g[] = {1};
  const std::size_t s1[] = {1, 2};
  const std::size_t s2[] = {1, 1};
  EXPECT_TRUE(evaluate(e, g, s1));
  EXPECT_FALSE(evaluate(e, g, s2));
}

TEST(StructureMatrix, AndOrExampleGolden) {
  const auto shape = two_by_one();
  const auto l = network_structure_matrix(rules(shape, {"t1 & g1", "t2 | g1"}), shape);
  EXPECT_EQ(l.col_indices(), (std::vector<std::size_t>{1, 1, 3, 3, 3, 4, 3, 4}));
}

TEST(StructureMatrix, DemoNetworkGoldens) {
  const auto shape = two_by_one();
  const auto l1 = network_structure_matrix(
      rules(shape, {"g1 <-> (t1 <-> t2)", "g1 <-> t1"}), shape);
  const auto l2 = network_structure_matrix(
      rules(shape, {"!(g1 & !t1 & t2)", "(g1 & t1) ^ t2"}), shape);
  EXPECT_EQ(l1, testing::demo_l1());
  EXPECT_EQ(l2, testing::demo_l2());
}

TEST(StructureMatrix, TableAndMatrixRulesAgreeWithExpressions) {
  const auto shape = two_by_one();
  const auto expr = parse_rule("g1 <-> t1", shape);
  const auto table = truth_table(expr, shape, 2);
  const auto from_table = table_rule(table, shape, 2);
  EXPECT_EQ(node_structure_matrix(from_table, shape, 2),
            node_structure_matrix(expr, shape, 2));
  const auto m = node_structure_matrix(expr, shape, 2);
  EXPECT_EQ(node_structure_matrix(matrix_rule(m, shape, 2), shape, 2), m);
  EXPECT_THROW(table_rule(OutputTable{1, 2}, shape, 1), DimensionMismatch);
  EXPECT_THROW(table_rule(OutputTable(8, 3), shape, 1), DimensionMismatch);
}

TEST(StructureMatrix, MultiValuedNodeViaTable) {
  const NetworkShape shape({3}, {2});
  // θ' = θ + 1 mod 3 under γ=1, hold under γ=2.
  RuleSet set;
  set.node_rules.push_back(table_rule({2, 3, 1, 1, 2, 3}, shape, 1));
  const auto l = network_structure_matrix(set, shape);
  EXPECT_EQ(l.col_indices(), (std::vector<std::size_t>{2, 3, 1, 1, 2, 3}));
}

TEST(StructureMatrix, StepMatchesTruthTable) {
  const auto shape = two_by_one();
  const auto l = testing::demo_l1();
  // (γ, θ¹, θ²) = (1, 1, 1) → (1, 1) = δ₄¹
  EXPECT_EQ(step_logical(l, CanonicalVector(2, 1), CanonicalVector(4, 1)).index, 1u);
  EXPECT_EQ(step_logical(l, CanonicalVector(2, 2), CanonicalVector(4, 1)).index, 4u);
  EXPECT_THROW(step_logical(l, CanonicalVector(3, 1), CanonicalVector(4, 1)),
               DimensionMismatch);
}

TEST(Network, MissingRuleAndDistributionErrors) {
  const auto shape = two_by_one();
  EXPECT_THROW(network_structure_matrix(rules(shape, {"t1"}), shape), ConfigError);
  const auto set = rules(shape, {"t1", "t2"});
  EXPECT_THROW(LogicalNetwork(shape, {set, set}, {0.5, 0.6}), BadDistribution);
  EXPECT_THROW(LogicalNetwork(shape, {set, set}, {1.5, -0.5}), BadDistribution);
  const LogicalNetwork ok(shape, {set, set}, {0.25, 0.75});
  const auto c = compile(ok);
  EXPECT_EQ(c.structures.size(), 2u);
  EXPECT_EQ(c.stacked().cols(), 16u);
}

}  // namespace
}  // namespace stpc::logic
