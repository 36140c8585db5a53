#include "lama/error.hpp"
#include "lama/parser.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

namespace lama::test {
namespace {

using K = Token::Kind;

std::vector<std::pair<K, std::string>> kinds(const std::vector<Token>& ts) {
  std::vector<std::pair<K, std::string>> out;
  for (const auto& t : ts) out.push_back({t.kind, t.text});
  return out;
}

TEST(Lexer, StateIdAndComment) {
  auto ts = lex("x' = y; -- c");
  std::vector<std::pair<K, std::string>> want = {
      {K::StateId, "x'"}, {K::Symbol, "="}, {K::Identifier, "y"}, {K::Symbol, ";"}};
  EXPECT_EQ(kinds(ts), want);
}

TEST(Lexer, EmptyInput) { EXPECT_TRUE(lex("").empty()); }

TEST(Lexer, FixedWidthType) {
  std::vector<std::pair<K, std::string>> want = {
      {K::Keyword, "sint"}, {K::Symbol, "["}, {K::Integer, "8"}, {K::Symbol, "]"}};
  EXPECT_EQ(kinds(lex("sint[8]")), want);
}

TEST(Lexer, ReservedWordTables) {
  EXPECT_EQ(reserved_words().size(), 37u);
  EXPECT_EQ(reserved_symbols().size(), 23u);
  for (const auto& w : reserved_words()) {
    auto ts = lex(w);
    ASSERT_EQ(ts.size(), 1u) << w;
    EXPECT_EQ(ts[0].kind, K::Keyword) << w;
  }
}

TEST(Lexer, LongestMatch) {
  EXPECT_EQ(kinds(lex("letter")), (std::vector<std::pair<K, std::string>>{{K::Identifier, "letter"}}));
  EXPECT_EQ(kinds(lex("<=>")), (std::vector<std::pair<K, std::string>>{{K::Symbol, "<="}, {K::Symbol, ">"}}));
  EXPECT_EQ(kinds(lex("_x1")), (std::vector<std::pair<K, std::string>>{{K::Identifier, "_x1"}}));
}

TEST(Lexer, Locations) {
  auto ts = lex("a\n  b'");
  ASSERT_EQ(ts.size(), 2u);
  EXPECT_EQ(ts[1].loc.line, 2);
  EXPECT_EQ(ts[1].loc.column, 3);
}

TEST(Lexer, BadCharacterIsLocated) {
  try {
    lex("x = @;");
    FAIL() << "expected a lexical error";
  } catch (const LexError& e) {
    EXPECT_EQ(e.loc().line, 1);
    EXPECT_EQ(e.loc().column, 5);
  }
}

TEST(Parser, InvariantOnly) {
  Program p = parse_program("invariant true;");
  Program want;
  want.invariant = Expr::constant_expr(Constant::of_bool(true));
  EXPECT_EQ(p, want);
}

TEST(Parser, ConstantsSection) {
  Program p = parse_program("constants n = 5;");
  ASSERT_EQ(p.constants.size(), 1u);
  EXPECT_EQ(p.constants[0].name, "n");
  EXPECT_EQ(p.constants[0].value, Constant::of_int(5));
}

Expr v(const char* n) { return Expr::var(n); }
Expr i(long x) { return Expr::constant_expr(Constant::of_int(x)); }
Expr bin(BinOp op, Expr a, Expr b) { return Expr::binary(op, std::move(a), std::move(b)); }

// Hand-built AST of the up/down counter.
Program updown_ast() {
  Node n;
  n.name = "UpDown";
  n.returns = {{"xo", LamaType::integer(), {}}};
  n.decls.locals = {{"x", LamaType::integer(), {}}};
  n.decls.states = {{"x_", LamaType::integer(), {}}};
  n.flow.definitions = {{"xo", v("x"), {}}};
  n.flow.transitions = {{"x_", v("x"), {}}};
  Automaton a;
  Location la{"A", {}, {}};
  la.flow.definitions = {{"x", bin(BinOp::Plus, v("x_"), i(1)), {}}};
  Location lb{"B", {}, {}};
  lb.flow.definitions = {{"x", bin(BinOp::Minus, v("x_"), i(1)), {}}};
  a.locations = {la, lb};
  a.initial = "A";
  a.edges = {{"A", "B", bin(BinOp::Ge, v("x_"), i(10)), 0, {}},
             {"B", "A", bin(BinOp::Le, v("x_"), i(0)), 1, {}}};
  n.automata = {a};
  n.initial = {{"x_", i(-1), {}}};

  Program p;
  p.decls.nodes = {n};
  p.decls.locals = {{"xo", LamaType::integer(), {}}};
  p.flow.definitions = {{"xo", NodeUse{"UpDown", {}}, {}}};
  p.invariant = bin(BinOp::And, bin(BinOp::Le, i(0), v("xo")), bin(BinOp::Le, v("xo"), i(10)));
  return p;
}

TEST(Parser, UpDownGolden) {
  Program p = parse_program(corpus("updown.lm"));
  EXPECT_EQ(p, updown_ast());
  ASSERT_EQ(p.decls.nodes.size(), 1u);
  EXPECT_EQ(p.decls.nodes[0].automata.size(), 1u);
  EXPECT_EQ(p.decls.nodes[0].automata[0].locations.size(), 2u);
}

TEST(Parser, IteExpression) {
  Expr e = parse_expr("(ite a (+ x 1) (- x 1))");
  EXPECT_EQ(e, Expr::ite(v("a"), bin(BinOp::Plus, v("x"), i(1)), bin(BinOp::Minus, v("x"), i(1))));
}

TEST(Parser, TrueAtom) { EXPECT_EQ(parse_expr("true"), Expr::constant_expr(Constant::of_bool(true))); }

TEST(Parser, MatchExpression) {
  Expr e = parse_expr("(match y {E1.n, E2.4})");
  EXPECT_EQ(e, Expr::match(v("y"), {Pattern{"E1", v("n"), {}}, Pattern{"E2", i(4), {}}}));
}

TEST(Parser, WildcardPattern) {
  Expr e = parse_expr("(match y {E1.1, _.2})");
  ASSERT_EQ(e.patterns.size(), 2u);
  EXPECT_FALSE(e.patterns[1].head.has_value());
}

TEST(Parser, ArityMismatch) {
  EXPECT_THROW(parse_expr("(+ 1)"), ParseError);
  EXPECT_THROW(parse_expr("(not a b)"), ParseError);
  EXPECT_THROW(parse_expr("(ite a b)"), ParseError);
}

TEST(Parser, Constants) {
  EXPECT_EQ(parse_constant("(- 1)"), Constant::of_int(-1));
  EXPECT_EQ(parse_constant("1 / 2"), Constant::of_real(1, 2));
  EXPECT_EQ(parse_constant("uint[4](15)"), Constant::of_uint(4, 15));
  EXPECT_EQ(parse_constant("sint[8]((- 128))"), Constant::of_sint(8, -128));
}

TEST(Parser, OutOfRangeFixedWidthIsDeferred) {
  EXPECT_EQ(parse_constant("uint[4](16)"), Constant::of_uint(4, 16));
}

TEST(Parser, SyntaxErrorNamesExpectationAndLocation) {
  try {
    parse_program("local x : int\ndefinition x = 1;");
    FAIL() << "expected a syntax error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("expected"), std::string::npos);
    EXPECT_EQ(e.loc().line, 2);
  }
}

TEST(Parser, EdgePrioritiesFollowTextOrder) {
  Program p = parse_program(corpus("two_automata.lm"));
  const auto& a = p.decls.nodes[0].automata[0];
  ASSERT_EQ(a.edges.size(), 2u);
  EXPECT_EQ(a.edges[0].priority, 0u);
  EXPECT_EQ(a.edges[1].priority, 1u);
}

TEST(Parser, PowType) {
  EXPECT_EQ(parse_type("int^3"), LamaType::pow(LamaType::integer(), 3));
  EXPECT_EQ(parse_type("(# int bool)"), LamaType::prod({LamaType::integer(), LamaType::boolean()}));
}

TEST(Pretty, MatchUsesBracesAndCommas) {
  std::string s = pretty(parse_expr("(match y {E1.n, _.4})"));
  EXPECT_NE(s.find('{'), std::string::npos);
  EXPECT_NE(s.find(", "), std::string::npos);
  EXPECT_EQ(parse_expr(s), parse_expr("(match y {E1.n, _.4})"));
}

TEST(Pretty, EmptyProgram) {
  Program p;
  EXPECT_EQ(parse_program(pretty(p)), p);
}

TEST(Pretty, UpDownRoundTrip) {
  Program p = parse_program(corpus("updown.lm"));
  EXPECT_EQ(parse_program(pretty(p)), p);
}

TEST(Desugar, Examples) {
  auto b = LamaType::boolean(), n = LamaType::integer(), r = LamaType::real();
  EXPECT_EQ(desugar_pow_type(LamaType::pow(b, 3)), LamaType::prod({b, b, b}));
  EXPECT_EQ(desugar_pow_type(n), n);
  EXPECT_EQ(desugar_pow_type(LamaType::prod({LamaType::pow(n, 2), r})),
            LamaType::prod({LamaType::prod({n, n}), r}));
  EXPECT_THROW(desugar_pow_type(LamaType::pow(n, 0)), MalformedTypeError);
}

}  // namespace
}  // namespace lama::test
