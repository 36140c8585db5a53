#include "lama/error.hpp"
#include "lama/verifier.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <deque>
#include <functional>
#include <set>

namespace lama::test {
namespace {

using Kind = Verdict::Kind;

EncodedSystem encode(const CheckedProgram& cp, const std::string& property = "") {
  if (property.empty()) return encode_program(cp, {});
  Expr p = parse_expr(property);
  return encode_program(cp, {}, &p);
}

class Verify : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!have_z3()) GTEST_SKIP() << "z3 not installed";
  }
};

// Runs the inputs of a counterexample through the interpreter. With a
// property override, invariant_ok is re-evaluated against it.
std::vector<StepRecord> replay(const CheckedProgram& cp, const std::vector<StepRecord>& trace,
                               const std::string& property = "") {
  std::vector<Bindings> inputs;
  for (const auto& r : trace) inputs.push_back(r.inputs);
  auto recs = Interpreter(cp).run(inputs);
  if (!property.empty())
    for (auto& r : recs) {
      Bindings env = r.inputs;
      env.insert(r.outputs.begin(), r.outputs.end());
      env.insert(r.states.begin(), r.states.end());
      r.invariant_ok = eval_expr(parse_expr(property), env, cp.env).boolean;
    }
  return recs;
}

TEST_F(Verify, UpDownLowerBoundFalsifiedAtZero) {
  CheckedProgram cp = checked(corpus("updown.lm"));
  EncodedSystem sys = encode(cp, "(>= xo 1)");
  SolverSession s(SolverOptions{});
  Verdict v = bmc(sys, 20, s);
  ASSERT_EQ(v.kind, Kind::Falsified);
  EXPECT_EQ(v.k, 0);
  ASSERT_EQ(v.trace.size(), 1u);
  EXPECT_EQ(v.trace[0].outputs.at("xo"), Value::of_int(0));
  EXPECT_EQ(v.trace[0].active_modes.at("UpDown.0"), "A");
  EXPECT_EQ(v.trace[0].invariant_ok, std::optional<bool>(false));
  EXPECT_EQ(s.depth(), 0u);

  auto recs = replay(cp, v.trace, "(>= xo 1)");
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(record_diff(recs[0], v.trace[0]), "");
  EXPECT_EQ(recs[0].invariant_ok, std::optional<bool>(false));
}

TEST_F(Verify, TrivialProperty) {
  CheckedProgram cp = checked(corpus("updown.lm"));
  EncodedSystem sys = encode(cp, "true");
  SolverSession s(SolverOptions{});
  Verdict b = bmc(sys, 5, s);
  EXPECT_EQ(b.kind, Kind::Exhausted);
  EXPECT_EQ(b.k, 5);
  Verdict k = k_induction(sys, 5, s);
  EXPECT_EQ(k.kind, Kind::Proved);
  EXPECT_EQ(k.k, 0);
}

TEST_F(Verify, UpDownBmcAgreesWithInterpreter) {
  CheckedProgram cp = checked(corpus("updown.lm"));
  auto recs = Interpreter(cp).run(std::vector<Bindings>(21));
  bool all = std::all_of(recs.begin(), recs.end(), [](const StepRecord& r) { return *r.invariant_ok; });
  ASSERT_TRUE(all);
  SolverSession s(SolverOptions{});
  Verdict v = bmc(encode(cp), 20, s);
  EXPECT_EQ(v.kind, Kind::Exhausted);
  EXPECT_EQ(v.k, 20);
}

TEST_F(Verify, UpDownProvedByInduction) {
  CheckedProgram cp = checked(corpus("updown.lm"));
  SolverSession s(SolverOptions{});
  Verdict v = k_induction(encode(cp), 10, s);
  EXPECT_EQ(v.kind, Kind::Proved);
  EXPECT_LE(v.k, 3);
}

// Reachable states by breadth-first search; every one must satisfy the invariant.
TEST(TwoCounterOracle, ReachableStatesSatisfyInvariant) {
  CheckedProgram cp = checked(corpus("two_counter.lm"));
  Interpreter in(cp);
  std::set<std::pair<long, long>> seen;
  std::deque<MachineState> todo{in.init()};
  while (!todo.empty()) {
    MachineState ms = todo.front();
    todo.pop_front();
    auto key = std::make_pair(ms.state_vars.at("c1")->integer.convert_to<long>(), ms.state_vars.at("c2")->integer.convert_to<long>());
    if (!seen.insert(key).second) continue;
    auto [next, rec] = in.step(ms, {});
    EXPECT_TRUE(*rec.invariant_ok) << key.first << "," << key.second;
    todo.push_back(next);
  }
  EXPECT_EQ(seen.size(), 5u);
}

// A step from an arbitrary state satisfying the invariant can break it, two
// consecutive ones cannot.
TEST(TwoCounterOracle, InductionDepth) {
  CheckedProgram cp = checked(corpus("two_counter.lm"));
  Interpreter in(cp);
  bool cex0 = false, cex1 = false;
  for (long c1 = -12; c1 <= 12; ++c1)
    for (long c2 = -12; c2 <= 12; ++c2) {
      MachineState s0;
      s0.state_vars["c1"] = Value::of_int(c1);
      s0.state_vars["c2"] = Value::of_int(c2);
      auto [s1, r0] = in.step(s0, {});
      auto [s2, r1] = in.step(s1, {});
      auto [s3, r2] = in.step(s2, {});
      if (*r0.invariant_ok && !*r1.invariant_ok) cex0 = true;
      if (*r0.invariant_ok && *r1.invariant_ok && !*r2.invariant_ok) cex1 = true;
    }
  EXPECT_TRUE(cex0);
  EXPECT_FALSE(cex1);
}

TEST_F(Verify, TwoCounterNeedsOneStep) {
  CheckedProgram cp = checked(corpus("two_counter.lm"));
  EncodedSystem sys = encode(cp);
  SolverSession s(SolverOptions{});
  Verdict v = k_induction(sys, 10, s);
  EXPECT_EQ(v.kind, Kind::Proved);
  EXPECT_EQ(v.k, 1);
  Verdict z = k_induction(sys, 0, s);
  EXPECT_EQ(z.kind, Kind::Exhausted);
  EXPECT_EQ(z.k, 0);
  EXPECT_EQ(s.depth(), 0u);
}

TEST_F(Verify, FalsifiedTracesReplay) {
  CheckedProgram cp = checked(corpus("updown.lm"));
  for (int bound : {0, 3, 5, 9}) {
    const std::string prop = "(<= xo " + std::to_string(bound) + ")";
    EncodedSystem sys = encode(cp, prop);
    SolverSession s(SolverOptions{});
    for (bool induction : {false, true}) {
      Verdict v = induction ? k_induction(sys, 20, s) : bmc(sys, 20, s);
      ASSERT_EQ(v.kind, Kind::Falsified) << bound;
      EXPECT_EQ(v.k, bound + 1);
      ASSERT_EQ(v.trace.size(), static_cast<std::size_t>(bound + 2));
      auto recs = replay(cp, v.trace, prop);
      ASSERT_EQ(recs.size(), v.trace.size());
      for (std::size_t i = 0; i < recs.size(); ++i) {
        EXPECT_EQ(record_diff(recs[i], v.trace[i]), "") << i;
        EXPECT_EQ(*recs[i].invariant_ok, i + 1 < recs.size()) << i;
      }
    }
  }
}

TEST_F(Verify, FalsifiedTraceWithInputs) {
  CheckedProgram cp = checked(corpus("node_in_location.lm"));
  EncodedSystem sys = encode(cp, "(< g 2)");
  SolverSession s(SolverOptions{});
  Verdict v = bmc(sys, 10, s);
  ASSERT_EQ(v.kind, Kind::Falsified);
  auto recs = replay(cp, v.trace, "(< g 2)");
  ASSERT_EQ(recs.size(), v.trace.size());
  for (std::size_t i = 0; i < recs.size(); ++i) EXPECT_EQ(record_diff(recs[i], v.trace[i]), "") << i;
  EXPECT_FALSE(*recs.back().invariant_ok);
}

// Wherever induction proves the invariant, bounded checking finds nothing,
// and both strategies agree on the depth of a counterexample.
TEST_F(Verify, StrategiesAgree) {
  for (const auto& f : corpus_files()) {
    CheckedProgram cp = checked(read_file(f));
    if (uses_fixed_width(cp)) continue;
    EncodedSystem sys = encode(cp);
    SolverSession s(SolverOptions{});
    Verdict k = k_induction(sys, 4, s);
    Verdict b = bmc(sys, 8, s);
    EXPECT_EQ(s.depth(), 0u);
    if (k.kind == Kind::Proved) EXPECT_EQ(b.kind, Kind::Exhausted) << f;
    if (k.kind == Kind::Falsified) {
      EXPECT_EQ(b.kind, Kind::Falsified) << f;
      EXPECT_EQ(b.k, k.k) << f;
    }
    if (b.kind == Kind::Falsified && b.k <= 4) EXPECT_EQ(k.kind, Kind::Falsified) << f;
  }
}

TEST_F(Verify, TrueButNotInductive) {
  CheckedProgram cp = checked(corpus("node_in_location.lm"));
  SolverSession s(SolverOptions{});
  Verdict v = k_induction(encode(cp), 10, s);
  EXPECT_EQ(v.kind, Kind::Exhausted);
  EXPECT_EQ(v.k, 10);
}

TEST_F(Verify, Serialization) {
  CheckedProgram cp = checked(corpus("updown.lm"));
  SolverSession s(SolverOptions{});
  Verdict v = bmc(encode(cp, "(>= xo 1)"), 3, s);
  EXPECT_EQ(serialize(v),
            "RESULT=falsified K=0\n"
            "step=0, UpDown.x_=(- 1), xo=0, UpDown.x=0, UpDown.xo=0, @mode(UpDown.0)=A, "
            "assertion=true, invariant=false\n");
}

struct MockRun {
  std::string log;
  std::string text;
};

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

MockRun with_mock(const std::string& name, const std::string& script,
                  const std::function<Verdict(SolverSession&)>& f, Verdict* out) {
  MockRun m;
  m.log = testing::TempDir() + "vmock_" + name + ".log";
  std::remove(m.log.c_str());
  SolverOptions o;
  o.command = MOCK_SOLVER_PATH;
  o.args = {"--log", m.log};
  if (!script.empty()) {
    std::string sp = m.log + ".script";
    std::ofstream(sp) << script;
    o.args.insert(o.args.end(), {"--script", sp});
  }
  {
    SolverSession s(o);
    *out = f(s);
    EXPECT_EQ(s.depth(), 0u) << name;
  }
  m.text = read_file(m.log);
  return m;
}

TEST(VerifyMock, StackBalancedOnEveryExit) {
  CheckedProgram cp = checked("state c : int; transition c' = (+ c 1); initial c = 0; invariant (< c 2);");
  EncodedSystem sys = encode_program(cp, {NatEncoding::Integer, EnumEncoding::Bitvector});
  struct Case {
    const char* name;
    const char* script;
    bool induction;
    Kind want;
  };
  const Case cases[] = {
      {"bmc_exhausted", "unsat unsat unsat", false, Kind::Exhausted},
      {"bmc_falsified", "unsat sat", false, Kind::Falsified},
      {"bmc_unknown", "unsat unknown", false, Kind::Unknown},
      {"kind_proved", "unsat sat unsat unsat", true, Kind::Proved},
      {"kind_falsified", "unsat sat sat", true, Kind::Falsified},
      {"kind_base_unknown", "unknown", true, Kind::Unknown},
      {"kind_step_unknown", "unsat unknown", true, Kind::Unknown},
      {"kind_exhausted", "unsat sat unsat sat unsat sat", true, Kind::Exhausted},
  };
  for (const auto& c : cases) {
    Verdict v;
    MockRun m = with_mock(
        c.name, c.script, [&](SolverSession& s) { return c.induction ? k_induction(sys, 2, s) : bmc(sys, 2, s); },
        &v);
    EXPECT_EQ(v.kind, c.want) << c.name;
    EXPECT_EQ(count(m.text, "(push 1)"), count(m.text, "(pop 1)")) << c.name;
  }
}

TEST(VerifyMock, UnknownCarriesReason) {
  CheckedProgram cp = checked("state c : int; transition c' = (+ c 1); initial c = 0; invariant (< c 2);");
  EncodedSystem sys = encode_program(cp, {});
  Verdict v;
  with_mock("unknown_reason", "unknown", [&](SolverSession& s) { return bmc(sys, 3, s); }, &v);
  EXPECT_EQ(v.kind, Kind::Unknown);
  EXPECT_EQ(v.reason, "solver answered unknown");
  EXPECT_EQ(serialize(v), "RESULT=unknown K=0\nREASON=solver answered unknown\n");
}

TEST(VerifyMock, SolverErrorPropagates) {
  CheckedProgram cp = checked("state c : int; transition c' = (+ c 1); initial c = 0; invariant (< c 2);");
  EncodedSystem sys = encode_program(cp, {});
  SolverOptions o;
  o.command = MOCK_SOLVER_PATH;
  o.args = {"--reject", "b$trans"};
  SolverSession s(o);
  EXPECT_THROW(bmc(sys, 3, s), SolverError);
  EXPECT_EQ(s.depth(), 0u);
}

}  // namespace
}  // namespace lama::test
