#include "lama/interp.hpp"

#include "lama/error.hpp"

#include <sstream>

namespace lama {

namespace {

[[noreturn]] void runtime(const std::string& rule, const std::string& msg, SourceLoc loc = {}) {
  throw RuntimeError(rule, msg, loc);
}

Rational as_rational(const Value& v) {
  return v.kind == Value::Kind::Real ? v.rational : Rational(v.integer);
}

int compare(const Value& a, const Value& b) {
  if (a.kind == Value::Kind::Real) {
    if (a.rational < b.rational) return -1;
    return a.rational > b.rational ? 1 : 0;
  }
  if (a.integer < b.integer) return -1;
  return a.integer > b.integer ? 1 : 0;
}

Value checked_fixed(const Value& like, Integer r, SourceLoc loc) {
  Value out = like;
  out.integer = std::move(r);
  bool ok;
  if (like.kind == Value::Kind::SInt) {
    Integer half = Integer(1) << static_cast<unsigned>(like.width - 1);
    ok = out.integer >= -half && out.integer < half;
  } else {
    ok = out.integer >= 0 && out.integer < (Integer(1) << static_cast<unsigned>(like.width));
  }
  if (!ok) runtime("overflow", out.integer.str() + " is out of range for " +
                                   (like.kind == Value::Kind::SInt ? "sint[" : "uint[") +
                                   like.width.str() + "]",
                   loc);
  return out;
}

Value arith(BinOp op, const Value& a, const Value& b, SourceLoc loc) {
  if (a.kind == Value::Kind::Real) {
    switch (op) {
      case BinOp::Plus: return Value::of_real(a.rational + b.rational);
      case BinOp::Minus: return Value::of_real(a.rational - b.rational);
      default: return Value::of_real(a.rational * b.rational);
    }
  }
  Integer r;
  switch (op) {
    case BinOp::Plus: r = a.integer + b.integer; break;
    case BinOp::Minus: r = a.integer - b.integer; break;
    default: r = a.integer * b.integer; break;
  }
  if (a.kind == Value::Kind::Int) return Value::of_int(std::move(r));
  return checked_fixed(a, std::move(r), loc);
}

// Euclidean division: the remainder is never negative.
std::pair<Integer, Integer> euclid(const Integer& a, const Integer& b) {
  Integer r = a % b;
  if (r < 0) r += b < 0 ? Integer(-b) : b;
  Integer q = (a - r) / b;
  return {q, r};
}

Value binary(BinOp op, const Value& a, const Value& b, SourceLoc loc) {
  switch (op) {
    case BinOp::Or: return Value::of_bool(a.boolean || b.boolean);
    case BinOp::And: return Value::of_bool(a.boolean && b.boolean);
    case BinOp::Xor: return Value::of_bool(a.boolean != b.boolean);
    case BinOp::Implies: return Value::of_bool(!a.boolean || b.boolean);
    case BinOp::Eq: return Value::of_bool(a == b);
    case BinOp::Lt: return Value::of_bool(compare(a, b) < 0);
    case BinOp::Gt: return Value::of_bool(compare(a, b) > 0);
    case BinOp::Le: return Value::of_bool(compare(a, b) <= 0);
    case BinOp::Ge: return Value::of_bool(compare(a, b) >= 0);
    case BinOp::Plus:
    case BinOp::Minus:
    case BinOp::Mul: return arith(op, a, b, loc);
    case BinOp::RealDiv:
      if (b.rational == 0) runtime("division-by-zero", "real division by zero", loc);
      return Value::of_real(as_rational(a) / as_rational(b));
    case BinOp::IntDiv:
    case BinOp::Mod: {
      if (b.integer == 0) runtime("division-by-zero", std::string(to_string(op)) + " by zero", loc);
      auto [q, r] = euclid(a.integer, b.integer);
      return Value::of_int(op == BinOp::IntDiv ? q : r);
    }
  }
  return Value{};
}

}  // namespace

Value eval_expr(const Expr& e, const Bindings& env, const Environments& envs) {
  switch (e.kind) {
    case Expr::Kind::Constant: return constant_value(e.constant);
    case Expr::Kind::Var: {
      if (auto it = env.find(e.name); it != env.end()) return it->second;
      if (auto it = envs.constant_values.find(e.name); it != envs.constant_values.end())
        return constant_value(it->second);
      if (auto it = envs.sigma.find(e.name); it != envs.sigma.end())
        return Value::of_enum(it->second, e.name);
      runtime("uninitialized-read", "read of uninitialized variable " + e.name, e.loc);
    }
    case Expr::Kind::Not: return Value::of_bool(!eval_expr(e.args[0], env, envs).boolean);
    case Expr::Kind::Binary:
      return binary(e.op, eval_expr(e.args[0], env, envs), eval_expr(e.args[1], env, envs), e.loc);
    case Expr::Kind::Ite: {
      Value c = eval_expr(e.args[0], env, envs);
      Value t = eval_expr(e.args[1], env, envs);
      Value f = eval_expr(e.args[2], env, envs);
      return c.boolean ? t : f;
    }
    case Expr::Kind::Tuple: {
      std::vector<Value> es;
      for (const auto& a : e.args) es.push_back(eval_expr(a, env, envs));
      return Value::of_tuple(std::move(es));
    }
    case Expr::Kind::Project: {
      auto it = env.find(e.name);
      if (it == env.end())
        runtime("uninitialized-read", "read of uninitialized variable " + e.name, e.loc);
      const Value& v = it->second;
      if (v.kind != Value::Kind::Tuple || e.index >= v.elems.size())
        runtime("bad-input", "projection out of range", e.loc);
      return v.elems[static_cast<std::size_t>(e.index)];
    }
    case Expr::Kind::Match: {
      Value s = eval_expr(e.args[0], env, envs);
      std::vector<Value> bodies;
      for (const auto& p : e.patterns) bodies.push_back(eval_expr(p.body, env, envs));
      for (std::size_t i = 0; i < e.patterns.size(); ++i)
        if (!e.patterns[i].head || *e.patterns[i].head == s.constructor) return bodies[i];
      runtime("match-failure", "no pattern matches " + s.constructor, e.loc);
    }
  }
  return Value{};
}

// Executes one step of one scope.
class ScopeRunner {
 public:
  ScopeRunner(const Interpreter& in, const Scope& s, const MachineState& st, StepRecord& rec)
      : in_(in), s_(s), st_(st), rec_(rec), a_(in.analysis_.at(s.path)) {}

  Bindings run(const Bindings& inputs, MachineState& next) {
    env_ = inputs;
    next = st_;
    for (const auto& [x, v] : st_.state_vars)
      if (v) env_[x] = *v;

    for (const auto& n : a_.order) visit(n, next);
    for (std::size_t a = 0; a < s_.automata->size(); ++a)
      next.automaton_selected[static_cast<int>(a)] = active(static_cast<int>(a));
    for (auto& [x, v] : next.state_vars) v = next_[x];

    if (s_.assertion && !eval(*s_.assertion).boolean) rec_.assertion_ok = false;
    record();
    return env_;
  }

 private:
  const Interpreter& in_;
  const Scope& s_;
  const MachineState& st_;
  StepRecord& rec_;
  const ScopeAnalysis& a_;
  Bindings env_;
  std::map<std::string, Value> next_;
  std::map<std::string, Value> mode_vals_, mode_next_;
  std::map<int, std::string> active_;

  Value eval(const Expr& e) const { return eval_expr(e, env_, in_.p_.env); }

  const Automaton& automaton(int a) const { return (*s_.automata)[static_cast<std::size_t>(a)]; }

  // Strong transition: the first enabled edge from the selected location
  // fixes the location whose flow runs now.
  const std::string& active(int a) {
    auto it = active_.find(a);
    if (it != active_.end()) return it->second;
    const Automaton& aut = automaton(a);
    const std::string& selected = st_.automaton_selected.at(a);
    std::string target = selected;
    for (const auto& e : aut.edges) {
      if (e.from != selected) continue;
      if (eval(e.cond).boolean) {
        target = e.to;
        break;
      }
    }
    return active_.emplace(a, target).first->second;
  }

  const Location& location(int a, const std::string& name) const {
    return *automaton(a).find_location(name);
  }

  static const InstantDefinition* find_def(const Flow& f, const std::string& x) {
    for (const auto& d : f.definitions)
      if (d.target == x) return &d;
    return nullptr;
  }

  static const Transition* find_trans(const Flow& f, const std::string& x) {
    for (const auto& t : f.transitions)
      if (t.target == x) return &t;
    return nullptr;
  }

  Value define(const InstantDefinition& d, MachineState& next) {
    if (!d.is_node_use()) return eval(d.expr());
    const NodeUse& u = d.use();
    const Scope& child = *s_.find_child(u.node);
    Bindings args;
    std::size_t i = 0;
    for (const auto& v : child.vars)
      if (v.kind == VarKind::Input) args[v.name] = eval(u.args[i++]);
    ScopeRunner runner(in_, child, st_.node_instances.at(u.node), rec_);
    Bindings out = runner.run(args, next.node_instances[u.node]);
    std::vector<Value> results;
    for (const auto& v : child.vars)
      if (v.kind == VarKind::Output) results.push_back(out.at(v.name));
    return results.size() == 1 ? results.front() : Value::of_tuple(std::move(results));
  }

  void visit(const DepNode& n, MachineState& next) {
    switch (n.usage) {
      case Usage::I:
      case Usage::SIn:
        return;
      case Usage::L:
      case Usage::O:
        if (!n.mode.is_global()) {
          if (active(n.mode.automaton) == n.mode.location)
            mode_vals_[n.var] = define(*find_def(location(n.mode.automaton, n.mode.location).flow, n.var), next);
          return;
        }
        if (const InstantDefinition* d = find_def(*s_.flow, n.var)) {
          env_[n.var] = define(*d, next);
        } else {
          int a = a_.managed.at(n.var);
          active(a);
          if (auto it = mode_vals_.find(n.var); it != mode_vals_.end()) {
            env_[n.var] = it->second;
          } else {
            for (const auto& def : automaton(a).defaults)
              if (def.target == n.var) env_[n.var] = eval(def.rhs);
          }
        }
        return;
      case Usage::SOut:
        if (!n.mode.is_global()) {
          if (active(n.mode.automaton) == n.mode.location)
            mode_next_[n.var] = eval(find_trans(location(n.mode.automaton, n.mode.location).flow, n.var)->rhs);
          return;
        }
        if (const Transition* t = find_trans(*s_.flow, n.var)) {
          next_[n.var] = eval(t->rhs);
        } else {
          active(a_.managed.at(n.var));
          next_[n.var] = mode_next_.at(n.var);
        }
        return;
    }
  }

  void record() {
    const std::string prefix = s_.path.empty() ? "" : s_.path + ".";
    for (const auto& v : s_.vars) {
      auto it = env_.find(v.name);
      if (it == env_.end()) continue;
      std::string key = prefix + v.name;
      if (v.kind == VarKind::State) {
        rec_.states[key] = it->second;
      } else if (s_.path.empty()) {
        (v.kind == VarKind::Input ? rec_.inputs : rec_.outputs)[key] = it->second;
      } else {
        rec_.locals[key] = it->second;
      }
    }
    for (const auto& [a, loc] : active_) rec_.active_modes[prefix + std::to_string(a)] = loc;
  }
};

Interpreter::Interpreter(const CheckedProgram& p) : p_(p), analysis_(analyze(p)) {}

namespace {

MachineState init_scope(const Scope& s, const Environments& env) {
  MachineState m;
  for (const auto& v : s.vars)
    if (v.kind == VarKind::State) m.state_vars[v.name] = std::nullopt;
  for (const auto& i : *s.initial) m.state_vars[i.target] = eval_expr(i.value, {}, env);
  for (std::size_t a = 0; a < s.automata->size(); ++a)
    m.automaton_selected[static_cast<int>(a)] = (*s.automata)[a].initial;
  for (const auto& c : s.children) m.node_instances[c.name] = init_scope(c, env);
  return m;
}

}  // namespace

MachineState Interpreter::init() const { return init_scope(p_.top, p_.env); }

std::pair<MachineState, StepRecord> Interpreter::step(const MachineState& s,
                                                      const Bindings& inputs) const {
  for (const auto& v : p_.top.vars) {
    if (v.kind != VarKind::Input) continue;
    auto it = inputs.find(v.name);
    if (it == inputs.end()) runtime("bad-input", "missing input " + v.name);
    if (!has_type(it->second, v.type, p_.env))
      runtime("bad-input", "input " + v.name + " = " + to_string(it->second) +
                               " does not have type " + to_string(v.type));
  }
  for (const auto& [x, v] : inputs) {
    const VarInfo* info = p_.top.find_var(x);
    if (!info || info->kind != VarKind::Input) runtime("bad-input", "unknown input " + x);
  }

  StepRecord rec;
  MachineState next;
  ScopeRunner runner(*this, p_.top, s, rec);
  Bindings env = runner.run(inputs, next);
  if (p_.invariant) rec.invariant_ok = eval_expr(*p_.invariant, env, p_.env).boolean;
  return {std::move(next), std::move(rec)};
}

std::vector<StepRecord> Interpreter::run(const std::vector<Bindings>& trace) const {
  std::vector<StepRecord> out;
  MachineState s = init();
  for (const auto& in : trace) {
    auto [next, rec] = step(s, in);
    bool ok = rec.assertion_ok;
    out.push_back(std::move(rec));
    if (!ok) break;
    s = std::move(next);
  }
  return out;
}

// -- trace text -----------------------------------------------------------------

namespace {

std::vector<std::string> split_top_level(const std::string& line) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : line) {
    if (c == '(' || c == '{') ++depth;
    if (c == ')' || c == '}') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<Bindings> parse_trace(const std::string& text, const Scope& top, const Environments& env) {
  std::vector<Bindings> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto c = line.find("--"); c != std::string::npos) line = line.substr(0, c);
    Bindings b;
    if (!trim(line).empty()) {
      for (const auto& part : split_top_level(line)) {
        std::string p = trim(part);
        auto eq = p.find('=');
        if (eq == std::string::npos)
          runtime("bad-input", "expected var=value", SourceLoc{lineno, 1});
        std::string name = trim(p.substr(0, eq));
        const VarInfo* v = top.find_var(name);
        if (!v || v->kind != VarKind::Input)
          runtime("bad-input", "unknown input " + name, SourceLoc{lineno, 1});
        try {
          b[name] = parse_value(trim(p.substr(eq + 1)), v->type, env);
        } catch (const RuntimeError& e) {
          throw RuntimeError(e.rule(), e.what(), SourceLoc{lineno, 1});
        }
      }
    }
    out.push_back(std::move(b));
  }
  return out;
}

std::string format_bindings(const Bindings& b) {
  std::string s;
  for (const auto& [x, v] : b) s += (s.empty() ? "" : ", ") + x + "=" + to_string(v);
  return s;
}

std::string format_record(const StepRecord& r) {
  std::vector<std::string> parts;
  for (const Bindings* b : {&r.inputs, &r.states, &r.outputs, &r.locals})
    if (!b->empty()) parts.push_back(format_bindings(*b));
  for (const auto& [a, loc] : r.active_modes) parts.push_back("@mode(" + a + ")=" + loc);
  parts.push_back(std::string("assertion=") + (r.assertion_ok ? "true" : "false"));
  if (r.invariant_ok) parts.push_back(std::string("invariant=") + (*r.invariant_ok ? "true" : "false"));
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : ", ") + p;
  return s;
}

}  // namespace lama
