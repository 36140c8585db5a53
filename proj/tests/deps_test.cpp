#include "lama/deps.hpp"
#include "lama/error.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

namespace lama::test {
namespace {

DepNode g(std::string v, Usage u) { return {std::move(v), Mode::global(), u}; }
DepNode m(std::string v, int a, std::string loc, Usage u) { return {std::move(v), Mode::in(a, std::move(loc)), u}; }

std::string causality_rule(const std::string& src) {
  CheckedProgram cp = checked(src);
  try {
    analyze(cp);
  } catch (const CausalityError& e) {
    return e.rule();
  }
  return "<causal>";
}

TEST(DepGraph, UpDownShape) {
  CheckedProgram cp = checked(corpus("updown.lm"));
  const Scope& node = cp.top.children.at(0);
  DepGraph gr = build_dep_graph(node);
  std::set<std::pair<DepNode, DepNode>> want = {
      {g("x", Usage::L), m("x", 0, "A", Usage::L)},
      {g("x", Usage::L), m("x", 0, "B", Usage::L)},
      {m("x", 0, "A", Usage::L), g("x_", Usage::SIn)},
      {m("x", 0, "B", Usage::L), g("x_", Usage::SIn)},
      {g("x_", Usage::SOut), g("x", Usage::L)},
      {g("xo", Usage::O), g("x", Usage::L)},
  };
  EXPECT_EQ(gr.edges, want);
  // The mode-defined variable appears as a global reference plus one node per location.
  int variants = 0;
  for (const auto& n : gr.nodes)
    if (n.var == "x") ++variants;
  EXPECT_EQ(variants, 3);
}

TEST(DepGraph, UpDownOrder) {
  CheckedProgram cp = checked(corpus("updown.lm"));
  auto order = analyze(cp).at("UpDown").order;
  std::vector<std::string> names;
  for (const auto& n : order) names.push_back(to_string(n));
  std::vector<std::string> want = {"x_:SIn", "x@0.A:L", "x@0.B:L", "x:L", "xo:O", "x_:SOut"};
  EXPECT_EQ(names, want);
}

TEST(DepGraph, EmptyScope) {
  CheckedProgram cp = checked("");
  EXPECT_TRUE(build_dep_graph(cp.top).nodes.empty());
}

TEST(DepGraph, TwoCycleIsPresent) {
  CheckedProgram cp = checked("local x : int; y : int; definition x = y; y = x;");
  DepGraph gr = build_dep_graph(cp.top);
  EXPECT_TRUE(gr.edges.count({g("x", Usage::L), g("y", Usage::L)}));
  EXPECT_TRUE(gr.edges.count({g("y", Usage::L), g("x", Usage::L)}));
}

TEST(DepGraph, DotFormat) {
  CheckedProgram cp = checked("local x : int; y : int; definition x = y; y = 1;");
  EXPECT_EQ(to_dot(build_dep_graph(cp.top)), "digraph deps {\n  \"x:L\" -> \"y:L\";\n}\n");
}

TEST(Deps, Expressions) {
  CheckedProgram cp = checked(
      "input a : bool; local x : int; y : int; state x_ : int; "
      "definition x = 1; y = x_; transition x_' = x; initial x_ = 0;");
  using S = std::set<std::pair<std::string, Usage>>;
  EXPECT_EQ(deps(parse_expr("(+ x 1)"), cp.top), (S{{"x", Usage::L}}));
  EXPECT_EQ(deps(parse_expr("true"), cp.top), S{});
  EXPECT_EQ(deps(parse_expr("(ite a x_ y)"), cp.top),
            (S{{"a", Usage::I}, {"x_", Usage::SIn}, {"y", Usage::L}}));
}

TEST(Deps, ConstructorsAndConstantsAreNotDependencies) {
  CheckedProgram cp = checked(
      "typedef enum E = { E1, E2 }; constants k = 3; input e : E; local z : int; "
      "definition z = (match e {E1.k, _.z});");
  using S = std::set<std::pair<std::string, Usage>>;
  // Arm bodies and the scrutinee count; the pattern heads do not.
  EXPECT_EQ(deps(parse_expr("(match e {E1.k, _.z})"), cp.top), (S{{"e", Usage::I}, {"z", Usage::L}}));
}

TEST(Causality, UpDownIsCausal) { EXPECT_EQ(causality_rule(corpus("updown.lm")), "<causal>"); }

TEST(Causality, SelfTransitionIsCausal) {
  EXPECT_EQ(causality_rule("state x : int; transition x' = x; initial x = 0;"), "<causal>");
}

TEST(Causality, TwoCycle) {
  CheckedProgram cp = checked("local x : int; y : int; definition x = y; y = x;");
  try {
    analyze(cp);
    FAIL() << "expected a cycle";
  } catch (const CausalityError& e) {
    EXPECT_EQ(e.rule(), "cycle");
    std::set<std::string> on_cycle(e.cycle().begin(), e.cycle().end());
    EXPECT_TRUE(on_cycle.count("x:L"));
    EXPECT_TRUE(on_cycle.count("y:L"));
  }
}

TEST(Causality, EdgeConditionOnModeLocal) {
  auto src =
      "nodes node N() returns (o : int); let local y : int; definition o = y; "
      "automaton let location A let definition y = 1; tel location B let definition y = 2; tel "
      "initial A; edge (A, B) : (> y 0); tel tel "
      "local r : int; definition r = (use N);";
  EXPECT_EQ(causality_rule(src), "cycle");
}

TEST(Causality, MissingReturnDefinition) {
  EXPECT_EQ(causality_rule("nodes node N() returns (o : int); let tel local r : int; definition r = (use N);"),
            "missing-definition");
}

TEST(Causality, LocationMustDefineManagedLocal) {
  auto src =
      "nodes node N() returns (o : int); let "
      "automaton let location A let definition o = 1; tel location B let tel initial A; tel tel "
      "local r : int; definition r = (use N);";
  EXPECT_EQ(causality_rule(src), "missing-definition");
}

TEST(Causality, DefaultCoversMissingLocation) {
  auto src =
      "nodes node N() returns (o : int); let "
      "automaton let location A let definition o = 1; tel location B let tel initial A; "
      "default o = 0; tel tel "
      "local r : int; definition r = (use N);";
  EXPECT_EQ(causality_rule(src), "<causal>");
}

TEST(Causality, TwoAutomataDefineOneVariable) {
  auto src =
      "nodes node N() returns (o : int); let "
      "automaton let location A let definition o = 1; tel initial A; tel "
      "automaton let location B let definition o = 2; tel initial B; tel tel "
      "local r : int; definition r = (use N);";
  EXPECT_EQ(causality_rule(src), "multi-automaton-definition");
}

TEST(Causality, GlobalAndModeDefinition) {
  auto src =
      "nodes node N() returns (o : int); let definition o = 0; "
      "automaton let location A let definition o = 1; tel initial A; tel tel "
      "local r : int; definition r = (use N);";
  EXPECT_EQ(causality_rule(src), "duplicate-definition");
}

TEST(Causality, NodeUsedTwice) {
  auto src =
      "nodes node N() returns (o : int); let definition o = 1; tel "
      "local r : int; s : int; definition r = (use N); s = (use N);";
  EXPECT_EQ(causality_rule(src), "node-use-once");
}

}  // namespace
}  // namespace lama::test
