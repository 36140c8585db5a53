#include "lama/deps.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <sstream>
#include <tuple>

namespace lama {

const char* to_string(Usage u) {
  switch (u) {
    case Usage::I: return "I";
    case Usage::O: return "O";
    case Usage::L: return "L";
    case Usage::SIn: return "SIn";
    case Usage::SOut: return "SOut";
  }
  return "?";
}

std::string to_string(const DepNode& n) {
  std::string s = n.var;
  if (!n.mode.is_global()) s += "@" + std::to_string(n.mode.automaton) + "." + n.mode.location;
  return s + ":" + to_string(n.usage);
}

std::vector<DepNode> DepGraph::successors(const DepNode& n) const {
  std::vector<DepNode> out;
  for (auto it = edges.lower_bound({n, DepNode{}}); it != edges.end() && it->first == n; ++it)
    out.push_back(it->second);
  return out;
}

namespace {

Usage read_usage(VarKind k) {
  switch (k) {
    case VarKind::Input: return Usage::I;
    case VarKind::Output: return Usage::O;
    case VarKind::Local: return Usage::L;
    case VarKind::State: return Usage::SIn;
  }
  return Usage::L;
}

Usage def_usage(const Scope& s, const std::string& x) {
  const VarInfo* v = s.find_var(x);
  return v && v->kind == VarKind::Output ? Usage::O : Usage::L;
}

void collect(const Expr& e, const Scope& s, std::set<std::pair<std::string, Usage>>& out) {
  switch (e.kind) {
    case Expr::Kind::Var:
    case Expr::Kind::Project:
      if (const VarInfo* v = s.find_var(e.name)) out.insert({e.name, read_usage(v->kind)});
      break;
    default:
      break;
  }
  for (const auto& a : e.args) collect(a, s, out);
  for (const auto& p : e.patterns) collect(p.body, s, out);
}

struct Definitions {
  // var -> number of global definitions / transitions
  std::map<std::string, int> global_defs, global_trans;
  // var -> automaton index (first automaton that defines it)
  std::map<std::string, int> managed_defs, managed_trans;
};

[[noreturn]] void fail(const std::string& rule, const std::string& msg) {
  throw CausalityError(rule, msg);
}

std::string where(const Scope& s) { return s.path.empty() ? std::string("program") : "node " + s.path; }

Definitions collect_definitions(const Scope& s) {
  Definitions d;
  for (const auto& def : s.flow->definitions)
    if (++d.global_defs[def.target] > 1)
      fail("duplicate-definition", def.target + " is defined twice in " + where(s));
  for (const auto& t : s.flow->transitions)
    if (++d.global_trans[t.target] > 1)
      fail("duplicate-definition", t.target + "' is defined twice in " + where(s));

  auto claim = [&](std::map<std::string, int>& managed, const std::map<std::string, int>& global,
                   const std::string& x, int a, const char* suffix) {
    if (global.count(x))
      fail("duplicate-definition",
           x + suffix + " is defined both globally and in an automaton in " + where(s));
    auto [it, inserted] = managed.emplace(x, a);
    if (!inserted && it->second != a)
      fail("multi-automaton-definition", x + suffix + " is defined in two automata in " + where(s));
  };

  for (std::size_t a = 0; a < s.automata->size(); ++a) {
    const Automaton& aut = (*s.automata)[a];
    for (const auto& loc : aut.locations) {
      std::set<std::string> seen_defs, seen_trans;
      for (const auto& def : loc.flow.definitions) {
        if (!seen_defs.insert(def.target).second)
          fail("duplicate-definition",
               def.target + " is defined twice in location " + loc.name + " in " + where(s));
        claim(d.managed_defs, d.global_defs, def.target, static_cast<int>(a), "");
      }
      for (const auto& t : loc.flow.transitions) {
        if (!seen_trans.insert(t.target).second)
          fail("duplicate-definition",
               t.target + "' is defined twice in location " + loc.name + " in " + where(s));
        claim(d.managed_trans, d.global_trans, t.target, static_cast<int>(a), "'");
      }
    }
    for (const auto& def : aut.defaults) claim(d.managed_defs, d.global_defs, def.target, static_cast<int>(a), "");
  }
  return d;
}

bool has_default(const Automaton& a, const std::string& x) {
  return std::any_of(a.defaults.begin(), a.defaults.end(),
                     [&](const Default& d) { return d.target == x; });
}

bool defines(const Flow& f, const std::string& x) {
  return std::any_of(f.definitions.begin(), f.definitions.end(),
                     [&](const InstantDefinition& d) { return d.target == x; });
}

bool transitions(const Flow& f, const std::string& x) {
  return std::any_of(f.transitions.begin(), f.transitions.end(),
                     [&](const Transition& t) { return t.target == x; });
}

void check_definitions(const Scope& s, const Definitions& d) {
  for (const auto& [x, a] : d.managed_defs) {
    const Automaton& aut = (*s.automata)[static_cast<std::size_t>(a)];
    if (has_default(aut, x)) continue;
    for (const auto& loc : aut.locations)
      if (!defines(loc.flow, x))
        fail("missing-definition", x + " has no definition in location " + loc.name + " in " + where(s));
  }
  for (const auto& [x, a] : d.managed_trans) {
    const Automaton& aut = (*s.automata)[static_cast<std::size_t>(a)];
    for (const auto& loc : aut.locations)
      if (!transitions(loc.flow, x))
        fail("missing-definition", x + "' has no definition in location " + loc.name + " in " + where(s));
  }
  for (const auto& v : s.vars) {
    switch (v.kind) {
      case VarKind::Output:
      case VarKind::Local:
        if (!d.global_defs.count(v.name) && !d.managed_defs.count(v.name))
          fail("missing-definition", std::string(to_string(v.kind)) + " " + v.name +
                                         " has no definition in " + where(s));
        break;
      case VarKind::State:
        if (!d.global_trans.count(v.name) && !d.managed_trans.count(v.name))
          fail("missing-definition", "state " + v.name + " has no transition in " + where(s));
        break;
      case VarKind::Input:
        break;
    }
  }
}

// Ordering key: declaration position, Global first, then automaton and
// location position, then usage.
using Rank = std::tuple<std::size_t, int, std::size_t, int, std::string>;

Rank rank(const DepNode& n, const Scope& s) {
  std::size_t loc_index = 0;
  if (!n.mode.is_global()) {
    const auto& locs = (*s.automata)[static_cast<std::size_t>(n.mode.automaton)].locations;
    for (std::size_t i = 0; i < locs.size(); ++i)
      if (locs[i].name == n.mode.location) loc_index = i;
  }
  return {s.var_index(n.var), n.mode.automaton, loc_index, static_cast<int>(n.usage), n.var};
}

std::vector<std::string> find_cycle(const DepGraph& g, const std::set<DepNode>& remaining) {
  enum class Color { White, Grey, Black };
  std::map<DepNode, Color> color;
  std::vector<DepNode> stack;
  std::vector<std::string> cycle;

  std::function<bool(const DepNode&)> visit = [&](const DepNode& n) {
    color[n] = Color::Grey;
    stack.push_back(n);
    for (const auto& m : g.successors(n)) {
      if (!remaining.count(m)) continue;
      if (color[m] == Color::Grey) {
        auto it = std::find(stack.begin(), stack.end(), m);
        for (; it != stack.end(); ++it) cycle.push_back(to_string(*it));
        cycle.push_back(to_string(m));
        return true;
      }
      if (color[m] == Color::White && visit(m)) return true;
    }
    stack.pop_back();
    color[n] = Color::Black;
    return false;
  };
  for (const auto& n : remaining)
    if (color[n] == Color::White && visit(n)) break;
  return cycle;
}

}  // namespace

std::set<std::pair<std::string, Usage>> deps(const Expr& e, const Scope& scope) {
  std::set<std::pair<std::string, Usage>> out;
  collect(e, scope, out);
  return out;
}

std::set<std::pair<std::string, Usage>> deps(const InstantDefinition& d, const Scope& scope) {
  std::set<std::pair<std::string, Usage>> out;
  if (d.is_node_use()) {
    for (const auto& a : d.use().args) collect(a, scope, out);
  } else {
    collect(d.expr(), scope, out);
  }
  return out;
}

DepGraph build_dep_graph(const Scope& s) {
  DepGraph g;
  auto link = [&](const DepNode& from, const std::set<std::pair<std::string, Usage>>& ds) {
    g.add_node(from);
    for (const auto& [y, u] : ds) g.add_edge(from, DepNode{y, Mode::global(), u});
  };

  auto flow_dep = [&](const Flow& f, const Mode& m,
                      const std::set<std::pair<std::string, Usage>>& conds) {
    for (const auto& d : f.definitions) {
      DepNode x{d.target, m, def_usage(s, d.target)};
      g.add_node(x);
      if (!m.is_global()) g.add_edge(DepNode{d.target, Mode::global(), x.usage}, x);
      link(x, deps(d, s));
      if (!m.is_global()) link(x, conds);
    }
    for (const auto& t : f.transitions) {
      DepNode x{t.target, m, Usage::SOut};
      g.add_node(x);
      if (!m.is_global()) g.add_edge(DepNode{t.target, Mode::global(), Usage::SOut}, x);
      link(x, deps(t.rhs, s));
      if (!m.is_global()) link(x, conds);
    }
  };

  flow_dep(*s.flow, Mode::global(), {});
  for (std::size_t a = 0; a < s.automata->size(); ++a) {
    const Automaton& aut = (*s.automata)[a];
    std::set<std::pair<std::string, Usage>> conds;
    for (const auto& e : aut.edges) {
      auto ds = deps(e.cond, s);
      conds.insert(ds.begin(), ds.end());
    }
    for (const auto& loc : aut.locations) flow_dep(loc.flow, Mode::in(static_cast<int>(a), loc.name), conds);
    for (const auto& d : aut.defaults) {
      DepNode x{d.target, Mode::global(), def_usage(s, d.target)};
      link(x, deps(d.rhs, s));
      link(x, conds);
    }
  }
  return g;
}

std::vector<DepNode> check_causal(const DepGraph& g, const Scope& s) {
  check_definitions(s, collect_definitions(s));

  std::map<DepNode, std::size_t> pending;
  std::map<DepNode, std::vector<DepNode>> readers;
  for (const auto& n : g.nodes) pending[n] = 0;
  for (const auto& [from, to] : g.edges) {
    ++pending[from];
    readers[to].push_back(from);
  }

  using Item = std::pair<Rank, DepNode>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> ready;
  for (const auto& [n, c] : pending)
    if (c == 0) ready.push({rank(n, s), n});

  std::vector<DepNode> order;
  while (!ready.empty()) {
    DepNode n = ready.top().second;
    ready.pop();
    order.push_back(n);
    for (const auto& r : readers[n])
      if (--pending[r] == 0) ready.push({rank(r, s), r});
  }

  if (order.size() != g.nodes.size()) {
    std::set<DepNode> remaining;
    for (const auto& [n, c] : pending)
      if (c > 0) remaining.insert(n);
    auto cycle = find_cycle(g, remaining);
    std::string msg = "cyclic dependency in " + where(s) + ":";
    for (std::size_t i = 0; i < cycle.size(); ++i) msg += (i ? " -> " : " ") + cycle[i];
    throw CausalityError("cycle", msg, cycle);
  }
  return order;
}

void check_use_once(const Scope& s) {
  std::set<std::string> used;
  auto scan = [&](const Flow& f) {
    for (const auto& d : f.definitions)
      if (d.is_node_use() && !used.insert(d.use().node).second)
        throw CausalityError("node-use-once", "node " + d.use().node + " is used more than once in " + where(s));
  };
  scan(*s.flow);
  for (const auto& a : *s.automata)
    for (const auto& l : a.locations) scan(l.flow);
}

std::string to_dot(const DepGraph& g) {
  std::ostringstream out;
  out << "digraph deps {\n";
  for (const auto& n : g.nodes) {
    bool isolated = std::none_of(g.edges.begin(), g.edges.end(), [&](const auto& e) {
      return e.first == n || e.second == n;
    });
    if (isolated) out << "  \"" << to_string(n) << "\";\n";
  }
  for (const auto& [from, to] : g.edges)
    out << "  \"" << to_string(from) << "\" -> \"" << to_string(to) << "\";\n";
  out << "}\n";
  return out.str();
}

ScopeAnalysis analyze_scope(const Scope& scope) {
  ScopeAnalysis a;
  check_use_once(scope);
  a.graph = build_dep_graph(scope);
  a.order = check_causal(a.graph, scope);
  Definitions d = collect_definitions(scope);
  a.managed = d.managed_defs;
  a.managed.insert(d.managed_trans.begin(), d.managed_trans.end());
  return a;
}

std::map<std::string, ScopeAnalysis> analyze(const CheckedProgram& p) {
  std::map<std::string, ScopeAnalysis> out;
  std::function<void(const Scope&)> walk = [&](const Scope& s) {
    for (const auto& c : s.children) walk(c);
    out.emplace(s.path, analyze_scope(s));
  };
  walk(p.top);
  return out;
}

}  // namespace lama
