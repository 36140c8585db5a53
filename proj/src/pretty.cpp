#include "lama/parser.hpp"

#include <sstream>

namespace lama {

namespace {

std::string integer_const(const Integer& v) {
  if (v < 0) return "(- " + Integer(-v).str() + ")";
  return v.str();
}

class Printer {
 public:
  std::string str() const { return out_.str(); }

  void program(const Program& p) {
    if (!p.typedefs.empty()) {
      line(0, "typedef");
      for (const auto& e : p.typedefs) {
        std::string s = "enum " + e.name + " = {";
        for (std::size_t i = 0; i < e.constructors.size(); ++i)
          s += (i ? ", " : "") + e.constructors[i];
        line(1, s + "};");
      }
    }
    if (!p.constants.empty()) {
      line(0, "constants");
      for (const auto& c : p.constants) line(1, c.name + " = " + pretty(c.value) + ";");
    }
    var_section(0, "input", p.inputs);
    declarations(0, p.decls);
    flow(0, p.flow);
    initial(0, p.initial);
    if (p.assertion) {
      line(0, "assertion");
      line(1, pretty(*p.assertion) + ";");
    }
    if (p.invariant) {
      line(0, "invariant");
      line(1, pretty(*p.invariant) + ";");
    }
  }

 private:
  std::ostringstream out_;

  void line(int indent, const std::string& s) {
    out_ << std::string(static_cast<std::size_t>(indent) * 2, ' ') << s << '\n';
  }

  static std::string typed_list(const std::vector<TypedVar>& vs) {
    std::string s;
    for (std::size_t i = 0; i < vs.size(); ++i)
      s += (i ? ", " : "") + vs[i].name + " : " + to_string(vs[i].type);
    return s;
  }

  void var_section(int indent, const char* kw, const std::vector<TypedVar>& vs) {
    if (vs.empty()) return;
    line(indent, kw);
    for (const auto& v : vs) line(indent + 1, v.name + " : " + to_string(v.type) + ";");
  }

  void declarations(int indent, const Declarations& d) {
    if (!d.nodes.empty()) {
      line(indent, "nodes");
      for (const auto& n : d.nodes) node(indent + 1, n);
    }
    var_section(indent, "local", d.locals);
    var_section(indent, "state", d.states);
  }

  void node(int indent, const Node& n) {
    line(indent, "node " + n.name + "(" + typed_list(n.params) + ") returns (" +
                     typed_list(n.returns) + ");");
    line(indent, "let");
    declarations(indent + 1, n.decls);
    flow(indent + 1, n.flow);
    for (const auto& a : n.automata) automaton(indent + 1, a);
    initial(indent + 1, n.initial);
    if (n.assertion) {
      line(indent + 1, "assertion");
      line(indent + 2, pretty(*n.assertion) + ";");
    }
    line(indent, "tel");
  }

  void flow(int indent, const Flow& f) {
    if (!f.definitions.empty()) {
      line(indent, "definition");
      for (const auto& d : f.definitions) {
        std::string rhs;
        if (d.is_node_use()) {
          rhs = "(use " + d.use().node;
          for (const auto& a : d.use().args) rhs += " " + pretty(a);
          rhs += ")";
        } else {
          rhs = pretty(d.expr());
        }
        line(indent + 1, d.target + " = " + rhs + ";");
      }
    }
    if (!f.transitions.empty()) {
      line(indent, "transition");
      for (const auto& t : f.transitions) line(indent + 1, t.target + "' = " + pretty(t.rhs) + ";");
    }
  }

  void automaton(int indent, const Automaton& a) {
    line(indent, "automaton let");
    for (const auto& l : a.locations) {
      line(indent + 1, "location " + l.name + " let");
      flow(indent + 2, l.flow);
      line(indent + 1, "tel");
    }
    line(indent + 1, "initial " + a.initial + ";");
    for (const auto& e : a.edges)
      line(indent + 1, "edge (" + e.from + ", " + e.to + ") : " + pretty(e.cond) + ";");
    if (!a.defaults.empty()) {
      line(indent + 1, "default");
      for (const auto& d : a.defaults) line(indent + 2, d.target + " = " + pretty(d.rhs) + ";");
    }
    line(indent, "tel");
  }

  void initial(int indent, const std::vector<StateInit>& is) {
    if (is.empty()) return;
    std::string s;
    for (std::size_t i = 0; i < is.size(); ++i)
      s += (i ? ", " : "") + is[i].target + " = " + pretty(is[i].value);
    line(indent, "initial " + s + ";");
  }
};

}  // namespace

std::string pretty(const Constant& c) {
  switch (c.kind) {
    case Constant::Kind::Bool: return c.boolean ? "true" : "false";
    case Constant::Kind::Int: return integer_const(c.value);
    case Constant::Kind::Real: return integer_const(c.value) + " / " + integer_const(c.denominator);
    case Constant::Kind::SInt: return "sint[" + c.width.str() + "](" + integer_const(c.value) + ")";
    case Constant::Kind::UInt: return "uint[" + c.width.str() + "](" + c.value.str() + ")";
  }
  return "?";
}

std::string pretty(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Constant: return pretty(e.constant);
    case Expr::Kind::Var: return e.name;
    case Expr::Kind::Not: return "(not " + pretty(e.args[0]) + ")";
    case Expr::Kind::Binary:
      return std::string("(") + to_string(e.op) + " " + pretty(e.args[0]) + " " +
             pretty(e.args[1]) + ")";
    case Expr::Kind::Ite:
      return "(ite " + pretty(e.args[0]) + " " + pretty(e.args[1]) + " " + pretty(e.args[2]) + ")";
    case Expr::Kind::Tuple: {
      std::string s = "(#";
      for (const auto& a : e.args) s += " " + pretty(a);
      return s + ")";
    }
    case Expr::Kind::Project: return "(project " + e.name + " " + e.index.str() + ")";
    case Expr::Kind::Match: {
      std::string s = "(match " + pretty(e.args[0]) + " {";
      for (std::size_t i = 0; i < e.patterns.size(); ++i) {
        const auto& p = e.patterns[i];
        s += (i ? ", " : "") + (p.head ? *p.head : std::string("_")) + "." + pretty(p.body);
      }
      return s + "})";
    }
  }
  return "?";
}

std::string pretty(const Program& p) {
  Printer pr;
  pr.program(p);
  return pr.str();
}

}  // namespace lama
