#pragma once

// Reference interpreter.
//
// A program is run as a transition system: at each step the inputs are
// read, the flow is evaluated in dependency order and the transitions
// produce the next state. Automata have strong transitions: the edge
// taken at step n already selects the flow evaluated at step n.

#include "lama/deps.hpp"
#include "lama/typecheck.hpp"
#include "lama/value.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lama {

struct MachineState {
  std::map<std::string, std::optional<Value>> state_vars;
  std::map<std::string, MachineState> node_instances;  // keyed by node name
  std::map<int, std::string> automaton_selected;       // automaton index -> location

  friend bool operator==(const MachineState&, const MachineState&) = default;
};

struct StepRecord {
  Bindings inputs;
  Bindings states;   // state values at this step; node states are qualified `N.x`
  Bindings outputs;  // program locals
  Bindings locals;   // node-internal values, qualified `N.x`
  std::map<std::string, std::string> active_modes;  // `N.i` -> location
  bool assertion_ok = true;
  std::optional<bool> invariant_ok;
};

// Strict evaluation. Unbound names resolve against Δ and Σ; anything else
// raises RuntimeError("uninitialized-read").
Value eval_expr(const Expr& e, const Bindings& env, const Environments& envs);

class Interpreter {
 public:
  // Runs the dependency analysis; throws CausalityError for non-causal programs.
  explicit Interpreter(const CheckedProgram& p);

  MachineState init() const;
  std::pair<MachineState, StepRecord> step(const MachineState& s, const Bindings& inputs) const;

  // Stops early at the first step whose assertion fails; that step is
  // included with assertion_ok = false.
  std::vector<StepRecord> run(const std::vector<Bindings>& trace) const;

  const CheckedProgram& program() const { return p_; }
  const std::map<std::string, ScopeAnalysis>& analysis() const { return analysis_; }

 private:
  const CheckedProgram& p_;
  std::map<std::string, ScopeAnalysis> analysis_;

  friend class ScopeRunner;
};

// One line per step: `var=value` pairs separated by `, `.
std::vector<Bindings> parse_trace(const std::string& text, const Scope& top, const Environments& env);
std::string format_bindings(const Bindings& b);
std::string format_record(const StepRecord& r);

}  // namespace lama
