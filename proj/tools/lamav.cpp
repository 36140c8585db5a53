// lamav: check, run and verify LAMA programs.
//
// Exit status: 0 ok / proved / exhausted, 1 falsified or invariant
// violated, 2 static or runtime errors in the program, 3 solver errors or
// an unknown verdict.

#include "lama/deps.hpp"
#include "lama/error.hpp"
#include "lama/interp.hpp"
#include "lama/parser.hpp"
#include "lama/smt_encode.hpp"
#include "lama/solver.hpp"
#include "lama/typecheck.hpp"
#include "lama/verifier.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kOk = 0;
constexpr int kViolated = 1;
constexpr int kStatic = 2;
constexpr int kInfra = 3;

struct Options {
  std::string file;
  std::string strategy = "kinduction";
  long max_depth = 20;
  long max_k = 10;
  std::string nat = "datatype";
  std::string enums = "bitvector";
  std::string solver = "z3";
  std::string logic = "ALL";
  double timeout = 0;
  std::string emit_trace;
  std::string property_file;
  std::string trace_file;
  long steps = 10;
  bool dot = false;
  std::string replay_log;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lama::Error("io", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Accepts `expr`, `expr;` or `invariant expr;`.
lama::Expr read_property(const std::string& path) {
  std::vector<lama::Token> toks = lama::lex(read_file(path));
  if (!toks.empty() && toks.front().kind == lama::Token::Kind::Keyword && toks.front().text == "invariant")
    toks.erase(toks.begin());
  if (!toks.empty() && toks.back().kind == lama::Token::Kind::Symbol && toks.back().text == ";")
    toks.pop_back();
  return lama::parse_expr(toks);
}

lama::CheckedProgram load(const Options& o) {
  lama::CheckedProgram cp = lama::check_program(lama::parse_program(read_file(o.file)));
  for (const auto& w : cp.warnings)
    std::cerr << o.file << ":" << w.loc.line << ":" << w.loc.column << ": warning: [" << w.rule
              << "] " << w.message << "\n";
  return cp;
}

int cmd_check(const Options& o) {
  lama::CheckedProgram cp = load(o);
  auto analysis = lama::analyze(cp);
  if (o.dot) {
    for (const auto& [path, a] : analysis) {
      std::cout << "// scope " << (path.empty() ? "<program>" : path) << "\n";
      std::cout << lama::to_dot(a.graph);
    }
  }
  std::cout << "OK\n";
  return kOk;
}

int cmd_run(const Options& o) {
  lama::CheckedProgram cp = load(o);
  lama::Interpreter in(cp);
  std::vector<lama::Bindings> trace;
  if (!o.trace_file.empty()) {
    trace = lama::parse_trace(read_file(o.trace_file), cp.top, cp.env);
  } else {
    trace.assign(static_cast<std::size_t>(o.steps), lama::Bindings{});
  }
  auto records = in.run(trace);
  bool violated = false;
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::cout << "step=" << i << ", " << lama::format_record(records[i]) << "\n";
    if (records[i].invariant_ok && !*records[i].invariant_ok) violated = true;
  }
  return violated ? kViolated : kOk;
}

lama::EncodingConfig encoding(const Options& o) {
  lama::EncodingConfig cfg;
  cfg.nat = o.nat == "integer" ? lama::NatEncoding::Integer : lama::NatEncoding::Datatype;
  cfg.enums = o.enums == "datatype" ? lama::EnumEncoding::Datatype : lama::EnumEncoding::Bitvector;
  return cfg;
}

struct Encoded {
  lama::CheckedProgram cp;
  std::optional<lama::Expr> property;
  lama::EncodedSystem sys;
};

std::unique_ptr<Encoded> encode(const Options& o) {
  auto e = std::make_unique<Encoded>();
  e->cp = load(o);
  lama::analyze(e->cp);
  if (!o.property_file.empty()) {
    e->property = read_property(o.property_file);
    lama::LamaType t = lama::infer_expr(*e->property, e->cp.env, e->cp.top.gamma());
    if (t != lama::LamaType::boolean())
      throw lama::TypeError("invariant", "property must have type bool, not " + lama::to_string(t),
                            e->property->loc);
  }
  e->sys = lama::encode_program(e->cp, encoding(o), e->property ? &*e->property : nullptr);
  for (const auto& w : e->sys.warnings) std::cerr << o.file << ": warning: " << w << "\n";
  return e;
}

int cmd_dump(const Options& o) {
  auto e = encode(o);
  std::cout << lama::dump_script(e->sys, o.logic, o.max_depth);
  return kOk;
}

int cmd_verify(const Options& o) {
  auto e = encode(o);
  lama::SolverOptions so;
  so.command = o.solver;
  so.logic = o.logic;
  so.timeout_seconds = o.timeout;
  so.replay_log = o.replay_log;
  lama::SolverSession session(so);
  lama::Verdict v = o.strategy == "bmc" ? lama::bmc(e->sys, o.max_depth, session)
                                        : lama::k_induction(e->sys, o.max_k, session);
  std::cout << lama::serialize(v);
  if (!o.emit_trace.empty() && v.kind == lama::Verdict::Kind::Falsified) {
    std::ofstream out(o.emit_trace);
    for (const auto& r : v.trace) out << lama::format_bindings(r.inputs) << "\n";
    if (!out) throw lama::Error("io", "cannot write " + o.emit_trace);
  }
  switch (v.kind) {
    case lama::Verdict::Kind::Falsified: return kViolated;
    case lama::Verdict::Kind::Unknown: return kInfra;
    default: return kOk;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Check, simulate and verify LAMA programs"};
  app.require_subcommand(1);
  Options o;

  auto add_file = [&](CLI::App* c) { c->add_option("file", o.file, "LAMA source file")->required(); };
  auto add_encoding = [&](CLI::App* c) {
    c->add_option("--nat-encoding", o.nat, "Index sort encoding")
        ->check(CLI::IsMember({"datatype", "integer"}));
    c->add_option("--enum-encoding", o.enums, "Enum sort encoding")
        ->check(CLI::IsMember({"datatype", "bitvector"}));
    c->add_option("--property-file", o.property_file, "File holding the property to verify");
    c->add_option("--logic", o.logic, "SMT-LIB logic");
  };

  CLI::App* check = app.add_subcommand("check", "Parse, type-check and analyse dependencies");
  add_file(check);
  check->add_flag("--dot", o.dot, "Print the dependency graphs");

  CLI::App* run = app.add_subcommand("run", "Simulate the program");
  add_file(run);
  run->add_option("--trace", o.trace_file, "Input trace, one step per line");
  run->add_option("--steps", o.steps, "Number of steps without a trace file");

  CLI::App* verify = app.add_subcommand("verify", "Verify the invariant");
  add_file(verify);
  add_encoding(verify);
  verify->add_option("--strategy", o.strategy, "bmc or kinduction")
      ->check(CLI::IsMember({"bmc", "kinduction"}));
  verify->add_option("--max-depth,--depth", o.max_depth, "BMC depth bound");
  verify->add_option("--max-k", o.max_k, "k-induction bound");
  verify->add_option("--solver", o.solver, "SMT solver command");
  verify->add_option("--timeout", o.timeout, "Seconds per check-sat, 0 for none");
  verify->add_option("--emit-trace", o.emit_trace, "Write the counterexample inputs as a run trace");
  verify->add_option("--replay-log", o.replay_log, "Append solver commands to this file");

  CLI::App* dump = app.add_subcommand("dump-smt", "Print the BMC query as an SMT-LIB2 script");
  add_file(dump);
  add_encoding(dump);
  dump->add_option("--max-depth,--depth", o.max_depth, "Unrolling depth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kStatic;
  }

  try {
    if (check->parsed()) return cmd_check(o);
    if (run->parsed()) return cmd_run(o);
    if (verify->parsed()) return cmd_verify(o);
    if (dump->parsed()) return cmd_dump(o);
  } catch (const lama::SolverError& e) {
    std::cerr << "lamav: solver error: " << e.what() << "\n";
    return kInfra;
  } catch (const lama::Error& e) {
    std::cerr << e.format(o.file) << "\n";
    return kStatic;
  }
  return kOk;
}
