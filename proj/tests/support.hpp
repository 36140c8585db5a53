#pragma once

// Shared fixtures for the test binaries.

#include "lama/interp.hpp"
#include "lama/parser.hpp"
#include "lama/typecheck.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace lama::test {

inline std::filesystem::path corpus_dir() { return LAMA_CORPUS_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string corpus(const std::string& name) { return read_file(corpus_dir() / name); }

inline std::vector<std::filesystem::path> corpus_files() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(corpus_dir()))
    if (e.path().extension() == ".lm") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

inline CheckedProgram checked(const std::string& source) {
  return check_program(parse_program(source));
}

// True when any declared variable uses a fixed-width integer type.
inline bool uses_fixed_width(const LamaType& t) {
  if (t.kind == LamaType::Kind::SInt || t.kind == LamaType::Kind::UInt) return true;
  for (const auto& e : t.elems)
    if (uses_fixed_width(e)) return true;
  return false;
}

inline bool uses_fixed_width(const Scope& s) {
  for (const auto& v : s.vars)
    if (uses_fixed_width(v.type)) return true;
  for (const auto& c : s.children)
    if (uses_fixed_width(c)) return true;
  return false;
}

inline bool uses_fixed_width(const CheckedProgram& cp) {
  for (const auto& [name, t] : cp.env.delta)
    if (uses_fixed_width(t)) return true;
  return uses_fixed_width(cp.top);
}

inline std::vector<Bindings> random_trace(const CheckedProgram& cp, std::mt19937_64& rng, std::size_t len) {
  std::vector<Bindings> trace(len);
  for (auto& b : trace)
    for (const auto& v : cp.top.vars)
      if (v.kind == VarKind::Input) b[v.name] = random_value(v.type, cp.env, rng);
  return trace;
}

// Empty when both records agree on every observable.
inline std::string record_diff(const StepRecord& a, const StepRecord& b) {
  auto cmp = [](const char* what, const Bindings& x, const Bindings& y) -> std::string {
    if (x == y) return {};
    return std::string(what) + ": " + format_bindings(x) + " vs " + format_bindings(y);
  };
  for (auto d : {cmp("inputs", a.inputs, b.inputs), cmp("states", a.states, b.states),
                 cmp("outputs", a.outputs, b.outputs), cmp("locals", a.locals, b.locals)})
    if (!d.empty()) return d;
  if (a.active_modes != b.active_modes) return "active modes differ";
  if (a.assertion_ok != b.assertion_ok) return "assertion differs";
  if (a.invariant_ok && b.invariant_ok && *a.invariant_ok != *b.invariant_ok) return "invariant differs";
  return {};
}

inline bool have_z3() { return std::system("command -v z3 >/dev/null 2>&1") == 0; }

}  // namespace lama::test
