// Randomised checks of invariants that must hold for every input.

#include "lama/deps.hpp"
#include "lama/error.hpp"
#include "lama/smt_encode.hpp"
#include "lama/verifier.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <set>

namespace lama::test {
namespace {

constexpr int kCases = 300;

long pick(std::mt19937_64& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

const EncodingConfig kAllConfigs[] = {
    {NatEncoding::Datatype, EnumEncoding::Bitvector},
    {NatEncoding::Datatype, EnumEncoding::Datatype},
    {NatEncoding::Integer, EnumEncoding::Bitvector},
    {NatEncoding::Integer, EnumEncoding::Datatype},
};

// ---- generators ----

// With `syntactic`, powers only take base types, as the concrete syntax requires.
LamaType random_type(std::mt19937_64& rng, int depth, bool syntactic = false) {
  switch (pick(rng, 0, depth > 0 ? 6 : 3)) {
    case 0: return LamaType::boolean();
    case 1: return LamaType::integer();
    case 2: return LamaType::real();
    case 3: return LamaType::named("E");
    case 4: {
      LamaType base = syntactic ? random_type(rng, 0, true) : random_type(rng, depth - 1);
      if (base.kind == LamaType::Kind::Named) base = LamaType::integer();
      return LamaType::pow(std::move(base), pick(rng, 1, 3));
    }
    default: {
      std::vector<LamaType> es;
      for (long i = pick(rng, 2, 3); i > 0; --i) es.push_back(random_type(rng, depth - 1, syntactic));
      return LamaType::prod(std::move(es));
    }
  }
}

Constant random_constant(std::mt19937_64& rng) {
  switch (pick(rng, 0, 4)) {
    case 0: return Constant::of_bool(pick(rng, 0, 1));
    case 1: return Constant::of_int(pick(rng, -50, 50));
    case 2: return Constant::of_real(pick(rng, -20, 20), pick(rng, 1, 9));
    case 3: return Constant::of_sint(8, pick(rng, -128, 127));
    default: return Constant::of_uint(16, pick(rng, 0, 65535));
  }
}

Expr random_expr(std::mt19937_64& rng, int depth) {
  static const char* vars[] = {"a", "b", "x_1", "count", "Y"};
  long k = pick(rng, 0, depth > 0 ? 7 : 1);
  switch (k) {
    case 0: return Expr::constant_expr(random_constant(rng));
    case 1: return Expr::var(vars[pick(rng, 0, 4)]);
    case 2: return Expr::negation(random_expr(rng, depth - 1));
    case 3: {
      auto op = static_cast<BinOp>(pick(rng, 0, static_cast<long>(BinOp::Mod)));
      return Expr::binary(op, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    }
    case 4: return Expr::ite(random_expr(rng, depth - 1), random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 5: {
      std::vector<Expr> es;
      for (long i = pick(rng, 2, 3); i > 0; --i) es.push_back(random_expr(rng, depth - 1));
      return Expr::tuple(std::move(es));
    }
    case 6: return Expr::project(vars[pick(rng, 0, 4)], pick(rng, 0, 3));
    default: {
      std::vector<Pattern> ps;
      for (long i = pick(rng, 1, 3); i > 0; --i) {
        Pattern p;
        if (pick(rng, 0, 3)) p.head = "E" + std::to_string(i);
        p.body = random_expr(rng, depth - 1);
        ps.push_back(std::move(p));
      }
      return Expr::match(random_expr(rng, depth - 1), std::move(ps));
    }
  }
}

// ---- parser ----

TEST(Property, PowDesugarIsIdempotent) {
  std::mt19937_64 rng(1);
  auto has_pow = [](auto&& self, const LamaType& t) -> bool {
    if (t.kind == LamaType::Kind::Pow) return true;
    return std::any_of(t.elems.begin(), t.elems.end(), [&](const LamaType& e) { return self(self, e); });
  };
  for (int i = 0; i < kCases; ++i) {
    LamaType t = random_type(rng, 3);
    LamaType d = desugar_pow_type(t);
    EXPECT_FALSE(has_pow(has_pow, d)) << to_string(t);
    EXPECT_EQ(desugar_pow_type(d), d) << to_string(t);
    LamaType u = random_type(rng, 3, true);
    EXPECT_EQ(parse_type(to_string(u)), u) << to_string(u);
  }
}

TEST(Property, LexerNeverCrashes) {
  std::mt19937_64 rng(2);
  const std::string alphabet = "abcXYZ_019'()-+*/#^{}.,;:=<> \n\t!@$%";
  for (int i = 0; i < kCases * 5; ++i) {
    std::string s;
    for (long n = pick(rng, 0, 40); n > 0; --n) s += alphabet[pick(rng, 0, alphabet.size() - 1)];
    try {
      auto toks = lex(s);
      // Lexing is insensitive to the spacing between tokens.
      std::string spaced;
      for (const auto& t : toks) spaced += t.text + " ";
      EXPECT_EQ(lex(spaced), toks) << s;
    } catch (const LexError&) {
    }
    try {
      parse_program(s);
    } catch (const LexError&) {
    } catch (const ParseError&) {
    }
  }
}

TEST(Property, ExprPrettyRoundTrip) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < kCases; ++i) {
    Expr e = random_expr(rng, 4);
    std::string text = pretty(e);
    EXPECT_EQ(parse_expr(text), e) << text;
    EXPECT_EQ(pretty(parse_expr(text)), text);
  }
}

TEST(Property, ProgramPrettyRoundTrip) {
  for (const auto& f : corpus_files()) {
    Program p = parse_program(read_file(f));
    std::string text = pretty(p);
    EXPECT_EQ(parse_program(text), p) << f;
    EXPECT_EQ(pretty(parse_program(text)), text) << f;
  }
}

// ---- typecheck ----

TEST(Property, InferenceIsDeterministic) {
  std::mt19937_64 rng(4);
  CheckedProgram cp = checked("typedef enum E = { E1, E2, E3 };");
  Gamma gamma{{"a", LamaType::integer()}, {"b", LamaType::boolean()}, {"x_1", LamaType::real()},
              {"count", LamaType::named("E")}, {"Y", LamaType::prod({LamaType::integer(), LamaType::boolean()})}};
  int typed = 0;
  for (int i = 0; i < kCases * 3; ++i) {
    Expr e = random_expr(rng, 3);
    std::optional<LamaType> first;
    try {
      first = infer_expr(e, cp.env, gamma);
    } catch (const TypeError&) {
    }
    std::optional<LamaType> second;
    try {
      second = infer_expr(e, cp.env, gamma);
    } catch (const TypeError&) {
    }
    EXPECT_EQ(first, second) << pretty(e);
    if (first) ++typed;
  }
  EXPECT_GT(typed, 0);
}

TEST(Property, UniverseJudgementsAreSound) {
  for (const auto& f : corpus_files()) {
    CheckedProgram cp = checked(read_file(f));
    for (const auto& j : cp.judgements) {
      auto rule = universe_rule(j.type, j.universe, cp.env);
      ASSERT_TRUE(rule.has_value()) << f << " " << to_string(j.type);
      EXPECT_EQ(*rule, j.rule) << f << " " << to_string(j.type);
    }
  }
}

TEST(Property, SchemesAreWellFormed) {
  for (long op = 0; op <= static_cast<long>(BinOp::Mod); ++op)
    EXPECT_TRUE(operator_scheme(static_cast<BinOp>(op)).well_formed()) << op;
  EXPECT_TRUE(not_scheme().well_formed());
  EXPECT_TRUE(ite_scheme().well_formed());
}

// ---- deps ----

void for_each_scope(const Scope& s, const std::function<void(const Scope&)>& f) {
  f(s);
  for (const auto& c : s.children) for_each_scope(c, f);
}

TEST(Property, StateUsagesAreSeparated) {
  for (const auto& f : corpus_files()) {
    CheckedProgram cp = checked(read_file(f));
    for_each_scope(cp.top, [&](const Scope& s) {
      DepGraph g = build_dep_graph(s);
      for (const auto& [from, to] : g.edges) {
        EXPECT_NE(from.usage, Usage::SIn) << f;  // reads of the pre-state depend on nothing
        // The post-state is only reached from its own global reference node.
        if (to.usage == Usage::SOut) {
          EXPECT_EQ(from.usage, Usage::SOut) << f;
          EXPECT_EQ(from.var, to.var) << f;
          EXPECT_TRUE(from.mode.is_global() && !to.mode.is_global()) << f;
        }
      }
    });
  }
}

TEST(Property, OrderRespectsEdges) {
  for (const auto& f : corpus_files()) {
    CheckedProgram cp = checked(read_file(f));
    for (const auto& [path, a] : analyze(cp)) {
      std::map<DepNode, std::size_t> pos;
      for (std::size_t i = 0; i < a.order.size(); ++i) pos[a.order[i]] = i;
      EXPECT_EQ(pos.size(), a.graph.nodes.size()) << f << " " << path;
      for (const auto& [from, to] : a.graph.edges) EXPECT_LT(pos.at(to), pos.at(from)) << f << " " << path;
    }
  }
}

// ---- values ----

TEST(Property, ValueRoundTrips) {
  std::mt19937_64 rng(5);
  CheckedProgram cp = checked("typedef enum E = { E1, E2, E3 }; enum F = { F1 };");
  std::vector<EncodedSystem> systems;
  for (const auto& cfg : kAllConfigs) systems.push_back(encode_program(cp, cfg));
  for (int i = 0; i < kCases; ++i) {
    LamaType t = desugar_pow_type(random_type(rng, 2));
    Value v = random_value(t, cp.env, rng);
    EXPECT_TRUE(has_type(v, t, cp.env));
    EXPECT_EQ(parse_value(to_string(v), t, cp.env), v) << to_string(v);
    if (t.kind == LamaType::Kind::Prod) continue;  // products are split into component streams
    for (const auto& sys : systems) EXPECT_EQ(sys.decode(sys.literal(v), t), v) << to_string(v);
  }
}

// ---- interpreter ----

// An automaton with guards over inputs only, so the expected location at
// every step follows from the first enabled edge of the previous one.
struct RandomAutomaton {
  int locations = 0;
  std::vector<std::tuple<int, int, Expr>> edges;  // in priority order
  std::string source;
};

RandomAutomaton random_automaton(std::mt19937_64& rng) {
  RandomAutomaton a;
  a.locations = pick(rng, 2, 4);
  std::string body = "input p : bool; q : bool; v : int; nodes node N(p : bool, q : bool, v : int) returns (o : int); let automaton let ";
  for (int l = 0; l < a.locations; ++l)
    body += "location L" + std::to_string(l) + " let definition o = " + std::to_string(l) + "; tel ";
  body += "initial L0; ";
  const char* guards[] = {"p", "q", "(not p)", "(and p q)", "(> v 0)", "(= v 0)", "true", "false"};
  for (long n = pick(rng, 1, 6); n > 0; --n) {
    int from = pick(rng, 0, a.locations - 1), to = pick(rng, 0, a.locations - 1);
    if (from == to) continue;
    const char* g = guards[pick(rng, 0, 7)];
    a.edges.emplace_back(from, to, parse_expr(g));
    body += "edge (L" + std::to_string(from) + ", L" + std::to_string(to) + ") : " + g + "; ";
  }
  body += "tel tel local r : int; definition r = (use N p q v);";
  a.source = body;
  return a;
}

TEST(Property, StrongTransitionsWithPriority) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 60; ++i) {
    RandomAutomaton a = random_automaton(rng);
    CheckedProgram cp = checked(a.source);
    auto trace = random_trace(cp, rng, 12);
    auto recs = Interpreter(cp).run(trace);
    ASSERT_EQ(recs.size(), trace.size());
    int cur = 0;
    for (std::size_t n = 0; n < trace.size(); ++n) {
      for (const auto& [from, to, guard] : a.edges)
        if (from == cur && eval_expr(guard, trace[n], cp.env).boolean) {
          cur = to;
          break;
        }
      EXPECT_EQ(recs[n].active_modes.at("N.0"), "L" + std::to_string(cur)) << a.source << " step " << n;
      EXPECT_EQ(recs[n].outputs.at("r"), Value::of_int(cur));
    }
  }
}

// Values of a node used in a location are reported exactly when that location is active.
TEST(Property, ActivationLaw) {
  std::mt19937_64 rng(7);
  CheckedProgram cp = checked(corpus("node_in_location.lm"));
  Interpreter in(cp);
  for (int i = 0; i < 40; ++i) {
    auto recs = in.run(random_trace(cp, rng, 10));
    for (const auto& r : recs) {
      bool on = r.active_modes.at("Gate.0") == "On";
      EXPECT_EQ(r.locals.count("Gate.Cnt.k") == 1, on);
      EXPECT_EQ(r.states.count("Gate.Cnt.n") == 1, on);
    }
  }
}

TEST(Property, ReportedModesAreLocations) {
  std::mt19937_64 rng(8);
  for (const auto& f : corpus_files()) {
    CheckedProgram cp = checked(read_file(f));
    Interpreter in(cp);
    std::map<std::string, std::set<std::string>> locations;
    for_each_scope(cp.top, [&](const Scope& s) {
      if (!s.automata) return;
      for (std::size_t i = 0; i < s.automata->size(); ++i)
        for (const auto& l : (*s.automata)[i].locations)
          locations[s.path + "." + std::to_string(i)].insert(l.name);
    });
    for (int i = 0; i < 5; ++i) {
      std::vector<StepRecord> recs;
      try {
        recs = in.run(random_trace(cp, rng, 8));
      } catch (const RuntimeError& e) {
        EXPECT_EQ(e.rule(), "overflow") << f;  // random fixed-width inputs may overflow
      }
      for (const auto& r : recs)
        for (const auto& [id, loc] : r.active_modes) EXPECT_TRUE(locations[id].count(loc)) << f << " " << id;
    }
  }
}

// ---- encoding ----

TEST(Property, RandomAutomataStreamNamesUnique) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 40; ++i) {
    CheckedProgram cp = checked(random_automaton(rng).source);
    for (const auto& cfg : kAllConfigs) {
      EncodedSystem sys = encode_program(cp, cfg);
      EXPECT_EQ(sys.streams.size(), sys.stream_names.size());
      EXPECT_EQ(dump_script(sys, "ALL", 2), dump_script(encode_program(cp, cfg), "ALL", 2));
    }
  }
}

TEST(Property, RandomAutomataAgreeWithSolver) {
  if (!have_z3()) GTEST_SKIP() << "z3 not installed";
  std::mt19937_64 rng(10);
  for (int i = 0; i < 12; ++i) {
    CheckedProgram cp = checked(random_automaton(rng).source);
    Interpreter in(cp);
    const auto& cfg = kAllConfigs[i % 4];
    EncodedSystem sys = encode_program(cp, cfg);
    SolverSession s(SolverOptions{});
    auto trace = random_trace(cp, rng, 6);
    auto want = in.run(trace);
    auto got = solve_trace(sys, s, trace);
    ASSERT_TRUE(got.has_value());
    ASSERT_EQ(got->size(), want.size());
    for (std::size_t n = 0; n < want.size(); ++n) EXPECT_EQ(record_diff((*got)[n], want[n]), "") << n;
  }
}

}  // namespace
}  // namespace lama::test
