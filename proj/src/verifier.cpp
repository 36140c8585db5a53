#include "lama/verifier.hpp"

#include "lama/error.hpp"

#include <functional>

namespace lama {

const char* to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Falsified: return "falsified";
    case Verdict::Kind::Proved: return "proved";
    case Verdict::Kind::Exhausted: return "exhausted";
    case Verdict::Kind::Unknown: return "unknown";
  }
  return "?";
}

std::string serialize(const Verdict& v) {
  std::string out = std::string("RESULT=") + to_string(v.kind) + " K=" + std::to_string(v.k) + "\n";
  if (v.kind == Verdict::Kind::Unknown && !v.reason.empty()) out += "REASON=" + v.reason + "\n";
  for (std::size_t i = 0; i < v.trace.size(); ++i)
    out += "step=" + std::to_string(i) + ", " + format_record(v.trace[i]) + "\n";
  return out;
}

void load_sorts(const EncodedSystem& sys, SolverSession& s) {
  for (const auto& d : sys.sort_decls) s.declare(d);
}

void load_system(const EncodedSystem& sys, SolverSession& s, const std::string& prefix) {
  for (const auto& d : sys.declarations(prefix)) s.declare(d);
}

namespace {

const Scope* find_scope(const Scope& root, const std::string& path) {
  if (root.path == path) return &root;
  for (const auto& c : root.children)
    if (const Scope* r = find_scope(c, path)) return r;
  return nullptr;
}

std::pair<std::string, std::string> split_qualified(const std::string& q) {
  auto dot = q.rfind('.');
  if (dot == std::string::npos) return {"", q};
  return {q.substr(0, dot), q.substr(dot + 1)};
}

Value assemble(const StreamTerm& t, const EncodedSystem& sys, const std::map<std::string, Sexpr>& model) {
  if (t.is_leaf()) return sys.decode(model.at(t.stream), t.type);
  std::vector<Value> es;
  for (const auto& e : t.elems) es.push_back(assemble(e, sys, model));
  return Value::of_tuple(std::move(es));
}

class Frame {
 public:
  explicit Frame(SolverSession& s) : s_(s), depth_(s.depth()) { s_.push(); }
  ~Frame() {
    try {
      while (s_.depth() > depth_) s_.pop();
    } catch (...) {
    }
  }

 private:
  SolverSession& s_;
  std::size_t depth_;
};

Verdict unknown(SolverSession& s) {
  Verdict v;
  v.kind = Verdict::Kind::Unknown;
  v.reason = s.timed_out() ? "timeout" : "solver answered unknown";
  return v;
}

}  // namespace

std::vector<StepRecord> extract_trace(const EncodedSystem& sys, SolverSession& s, long k,
                                      const std::string& prefix) {
  const CheckedProgram& prog = *sys.program;
  std::vector<StepRecord> trace;
  for (long i = 0; i <= k; ++i) {
    Sexpr idx = sys.index(i);
    std::vector<Sexpr> terms;
    std::vector<std::string> leaf_names;
    for (const auto& d : sys.streams) {
      terms.push_back(app(prefix + d.name, {idx}));
      leaf_names.push_back(d.name);
    }
    // Constant activations are resolved here; the rest are queried.
    std::map<std::string, bool> active;
    std::vector<std::string> scope_paths;
    for (const auto& [path, e] : sys.delta.activations) {
      if (e.is("true") || e.is("false")) {
        active[path] = e.is("true");
        continue;
      }
      scope_paths.push_back(path);
      terms.push_back(sys.rename(e, prefix));
    }
    // Activations mention the free index `n`; substitute the concrete index.
    std::function<Sexpr(const Sexpr&)> at_index = [&](const Sexpr& t) -> Sexpr {
      if (t.is("n")) return idx;
      if (t.is_atom) return t;
      std::vector<Sexpr> items;
      for (const auto& x : t.list) items.push_back(at_index(x));
      return Sexpr::make_list(std::move(items));
    };
    for (std::size_t j = leaf_names.size(); j < terms.size(); ++j) terms[j] = at_index(terms[j]);
    terms.push_back(sys.assertion_at(prefix, idx));
    terms.push_back(sys.property_at(prefix, idx));

    auto values = s.get_values(terms);
    std::map<std::string, Sexpr> model;
    for (std::size_t j = 0; j < leaf_names.size(); ++j) model[leaf_names[j]] = values[j].second;
    for (std::size_t j = 0; j < scope_paths.size(); ++j)
      active[scope_paths[j]] = values[leaf_names.size() + j].second.is("true");

    StepRecord rec;
    for (const auto& [qname, term] : sys.delta.vars) {
      auto [path, var] = split_qualified(qname);
      if (!active.at(path)) continue;
      const Scope* sc = find_scope(prog.top, path);
      const VarInfo* info = sc->find_var(var);
      Value v = assemble(term, sys, model);
      if (info->kind == VarKind::State) {
        rec.states[qname] = v;
      } else if (path.empty()) {
        (info->kind == VarKind::Input ? rec.inputs : rec.outputs)[qname] = v;
      } else {
        rec.locals[qname] = v;
      }
    }
    for (const auto& [id, as] : sys.delta.automata) {
      auto [path, index] = split_qualified(id);
      if (!active.at(path)) continue;
      rec.active_modes[id] = sys.decode(model.at(as.s), LamaType::named(as.sort)).constructor;
    }
    rec.assertion_ok = values[values.size() - 2].second.is("true");
    rec.invariant_ok = values.back().second.is("true");
    trace.push_back(std::move(rec));
  }
  return trace;
}

Verdict bmc(const EncodedSystem& sys, long max_depth, SolverSession& s) {
  const std::string p = "b$";
  Frame frame(s);
  load_sorts(sys, s);
  load_system(sys, s, p);
  s.assert_formula(sys.init_at(p));
  s.assert_formula(sys.assertion_at(p, sys.index(0)));
  s.assert_formula(sys.step_at(p, sys.index(0)));
  for (long k = 0; k <= max_depth; ++k) {
    s.push();
    s.assert_formula(mk_not(sys.property_at(p, sys.index(k))));
    SatResult r = s.check_sat();
    if (r == SatResult::Sat) {
      Verdict v;
      v.kind = Verdict::Kind::Falsified;
      v.k = k;
      v.trace = extract_trace(sys, s, k, p);
      return v;
    }
    if (r == SatResult::Unknown) return unknown(s);
    s.pop();
    s.assert_formula(sys.property_at(p, sys.index(k)));
    if (k < max_depth) {
      s.assert_formula(sys.assertion_at(p, sys.index(k + 1)));
      s.assert_formula(sys.step_at(p, sys.index(k + 1)));
    }
  }
  Verdict v;
  v.kind = Verdict::Kind::Exhausted;
  v.k = max_depth;
  return v;
}

Verdict k_induction(const EncodedSystem& sys, long max_k, SolverSession& s) {
  const std::string b = "b$", st = "s$";
  Frame frame(s);
  load_sorts(sys, s);
  load_system(sys, s, b);
  load_system(sys, s, st);
  const Sexpr n("s$n");
  s.declare("(declare-fun s$n () " + sys.index_sort().str() + ")");
  if (sys.config.nat == NatEncoding::Integer) s.assert_formula(app(">=", {n, Sexpr("0")}));

  s.assert_formula(sys.init_at(b));
  s.assert_formula(sys.assertion_at(b, sys.index(0)));
  s.assert_formula(sys.step_at(b, sys.index(0)));
  for (long i = 0; i <= 1; ++i) {
    s.assert_formula(sys.step_at(st, sys.offset(n, i)));
    s.assert_formula(sys.assertion_at(st, sys.offset(n, i)));
  }

  for (long k = 0; k <= max_k; ++k) {
    // base case at depth k
    s.push();
    s.assert_formula(mk_not(sys.property_at(b, sys.index(k))));
    SatResult r = s.check_sat();
    if (r == SatResult::Sat) {
      Verdict v;
      v.kind = Verdict::Kind::Falsified;
      v.k = k;
      v.trace = extract_trace(sys, s, k, b);
      return v;
    }
    if (r == SatResult::Unknown) return unknown(s);
    s.pop();
    s.assert_formula(sys.property_at(b, sys.index(k)));
    s.assert_formula(sys.assertion_at(b, sys.index(k + 1)));
    s.assert_formula(sys.step_at(b, sys.index(k + 1)));

    // step case: P(n..n+k), T(n..n+k+1) |= P(n+k+1)
    s.assert_formula(sys.property_at(st, sys.offset(n, k)));
    s.push();
    s.assert_formula(mk_not(sys.property_at(st, sys.offset(n, k + 1))));
    r = s.check_sat();
    s.pop();
    if (r == SatResult::Unsat) {
      Verdict v;
      v.kind = Verdict::Kind::Proved;
      v.k = k;
      return v;
    }
    if (r == SatResult::Unknown) return unknown(s);
    s.assert_formula(sys.step_at(st, sys.offset(n, k + 2)));
    s.assert_formula(sys.assertion_at(st, sys.offset(n, k + 2)));
  }
  Verdict v;
  v.kind = Verdict::Kind::Exhausted;
  v.k = max_k;
  return v;
}

std::optional<std::vector<StepRecord>> solve_trace(const EncodedSystem& sys, SolverSession& s,
                                                   const std::vector<Bindings>& trace) {
  if (trace.empty()) return std::vector<StepRecord>{};
  const std::string p = "r$";
  Frame frame(s);
  load_sorts(sys, s);
  load_system(sys, s, p);
  s.assert_formula(sys.init_at(p));
  for (std::size_t i = 0; i < trace.size(); ++i) {
    Sexpr idx = sys.index(static_cast<long>(i));
    s.assert_formula(sys.step_at(p, idx));
    for (const auto& [x, v] : trace[i]) s.assert_formula(sys.bind(sys.delta.vars.at(x), v, idx, p));
  }
  if (s.check_sat() != SatResult::Sat) return std::nullopt;
  return extract_trace(sys, s, static_cast<long>(trace.size()) - 1, p);
}

}  // namespace lama
