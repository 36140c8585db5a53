#include "lama/typecheck.hpp"

#include <algorithm>
#include <functional>

namespace lama {

const char* to_string(Universe u) { return u == Universe::Num ? "Num" : "Type"; }

const char* to_string(VarKind k) {
  switch (k) {
    case VarKind::Input: return "input";
    case VarKind::Output: return "output";
    case VarKind::Local: return "local";
    case VarKind::State: return "state";
  }
  return "?";
}

// -- intermediate types -----------------------------------------------------

IntermediateType IntermediateType::of(LamaType t) {
  IntermediateType r;
  r.kind = Kind::Surface;
  r.surface = std::move(t);
  return r;
}

IntermediateType IntermediateType::ok() { return IntermediateType{}; }

IntermediateType IntermediateType::type_var(std::string name) {
  IntermediateType r;
  r.kind = Kind::TypeVar;
  r.var = std::move(name);
  return r;
}

IntermediateType IntermediateType::arrow(IntermediateType dom, IntermediateType cod) {
  IntermediateType r;
  r.kind = Kind::Arrow;
  r.parts = {std::make_shared<const IntermediateType>(std::move(dom)),
             std::make_shared<const IntermediateType>(std::move(cod))};
  return r;
}

IntermediateType IntermediateType::forall(std::string var, Universe u, IntermediateType body) {
  IntermediateType r;
  r.kind = Kind::Forall;
  r.var = std::move(var);
  r.universe = u;
  r.parts = {std::make_shared<const IntermediateType>(std::move(body))};
  return r;
}

bool IntermediateType::is_quantifier_free() const {
  switch (kind) {
    case Kind::Forall: return false;
    case Kind::Arrow: return dom().is_quantifier_free() && cod().is_quantifier_free();
    default: return true;
  }
}

bool IntermediateType::well_formed() const {
  const IntermediateType* t = this;
  while (t->kind == Kind::Forall) t = &t->body();
  return t->is_quantifier_free();
}

std::string to_string(const IntermediateType& t) {
  using K = IntermediateType::Kind;
  switch (t.kind) {
    case K::Surface: return to_string(t.surface);
    case K::Ok: return "ok";
    case K::TypeVar: return t.var;
    case K::Arrow: {
      std::string d = to_string(t.dom());
      if (t.dom().kind == K::Arrow) d = "(" + d + ")";
      return d + " => " + to_string(t.cod());
    }
    case K::Forall:
      return std::string("forall ") + t.var + " : " + to_string(t.universe) + ". " +
             to_string(t.body());
  }
  return "?";
}

IntermediateType NodeSignature::arrow() const {
  return IntermediateType::arrow(IntermediateType::of(LamaType::prod(params)),
                                 IntermediateType::of(LamaType::prod(returns)));
}

LamaType NodeSignature::result_type() const {
  if (returns.size() == 1) return returns.front();
  return LamaType::prod(returns);
}

// -- scopes -------------------------------------------------------------------

const VarInfo* Scope::find_var(const std::string& n) const {
  for (const auto& v : vars)
    if (v.name == n) return &v;
  return nullptr;
}

const Scope* Scope::find_child(const std::string& n) const {
  for (const auto& c : children)
    if (c.name == n) return &c;
  return nullptr;
}

std::size_t Scope::var_index(const std::string& n) const {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i].name == n) return i;
  return static_cast<std::size_t>(-1);
}

Gamma Scope::gamma() const {
  Gamma g;
  for (const auto& v : vars) g.emplace(v.name, v.type);
  return g;
}

// -- universes and schemes --------------------------------------------------

std::optional<std::string> universe_rule(const LamaType& t, Universe u, const Environments& env) {
  using K = LamaType::Kind;
  bool numeric = t.kind == K::Int || t.kind == K::Real || t.kind == K::SInt || t.kind == K::UInt;
  if (u == Universe::Num) {
    if (numeric) return std::string("num-univ");
    return std::nullopt;
  }
  if (numeric) return std::string("univ-gen");
  switch (t.kind) {
    case K::Bool: return std::string("bool-univ");
    case K::Named:
      if (env.enums.count(t.name)) return std::string("enum-univ");
      return std::nullopt;
    case K::Prod:
      for (const auto& e : t.elems)
        if (!universe_rule(e, Universe::Type, env)) return std::nullopt;
      return std::string("prod-univ");
    default:
      return std::nullopt;
  }
}

namespace {

using IT = IntermediateType;

IT base(LamaType t) { return IT::of(std::move(t)); }

IT binary_scheme(IT a, IT b, IT r) { return IT::arrow(std::move(a), IT::arrow(std::move(b), std::move(r))); }

const char* op_rule(BinOp op) {
  switch (op) {
    case BinOp::Plus:
    case BinOp::Minus:
    case BinOp::Mul: return "arith";
    case BinOp::RealDiv: return "real-arith";
    case BinOp::IntDiv:
    case BinOp::Mod: return "int-arith";
    case BinOp::Eq: return "eq";
    case BinOp::Lt:
    case BinOp::Gt:
    case BinOp::Le:
    case BinOp::Ge: return "rels";
    case BinOp::Or:
    case BinOp::And:
    case BinOp::Xor:
    case BinOp::Implies: return "bin-bool";
  }
  return "?";
}

}  // namespace

IntermediateType operator_scheme(BinOp op) {
  auto t = [] { return IT::type_var("t"); };
  switch (op) {
    case BinOp::Plus:
    case BinOp::Minus:
    case BinOp::Mul:
      return IT::forall("t", Universe::Num, binary_scheme(t(), t(), t()));
    case BinOp::RealDiv:
      return binary_scheme(base(LamaType::real()), base(LamaType::real()), base(LamaType::real()));
    case BinOp::IntDiv:
    case BinOp::Mod:
      return binary_scheme(base(LamaType::integer()), base(LamaType::integer()),
                           base(LamaType::integer()));
    case BinOp::Eq:
      return IT::forall("t", Universe::Type, binary_scheme(t(), t(), base(LamaType::boolean())));
    case BinOp::Lt:
    case BinOp::Gt:
    case BinOp::Le:
    case BinOp::Ge:
      return IT::forall("t", Universe::Num, binary_scheme(t(), t(), base(LamaType::boolean())));
    case BinOp::Or:
    case BinOp::And:
    case BinOp::Xor:
    case BinOp::Implies:
      return binary_scheme(base(LamaType::boolean()), base(LamaType::boolean()),
                           base(LamaType::boolean()));
  }
  return IT::ok();
}

IntermediateType not_scheme() {
  return IT::arrow(base(LamaType::boolean()), base(LamaType::boolean()));
}

IntermediateType ite_scheme() {
  return IT::forall("t", Universe::Type,
                    IT::arrow(base(LamaType::boolean()),
                              binary_scheme(IT::type_var("t"), IT::type_var("t"), IT::type_var("t"))));
}

namespace {

IT substitute(const IT& t, const std::map<std::string, LamaType>& subst) {
  switch (t.kind) {
    case IT::Kind::TypeVar: {
      auto it = subst.find(t.var);
      return it == subst.end() ? t : IT::of(it->second);
    }
    case IT::Kind::Arrow: return IT::arrow(substitute(t.dom(), subst), substitute(t.cod(), subst));
    case IT::Kind::Forall:
      return IT::forall(t.var, t.universe, substitute(t.body(), subst));
    default: return t;
  }
}

}  // namespace

LamaType instantiate(const IntermediateType& scheme, const std::vector<LamaType>& args,
                     const Environments& env, SourceLoc loc, const std::string& rule,
                     std::vector<UniverseJudgement>* log) {
  std::map<std::string, Universe> quantified;
  const IT* body = &scheme;
  while (body->kind == IT::Kind::Forall) {
    quantified.emplace(body->var, body->universe);
    body = &body->body();
  }
  std::map<std::string, LamaType> subst;
  IT current = *body;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (current.kind != IT::Kind::Arrow)
      throw TypeError("app", "too many arguments for operator of type " + to_string(scheme), loc);
    const IT& dom = current.dom();
    if (dom.kind == IT::Kind::TypeVar && !subst.count(dom.var)) {
      auto q = quantified.find(dom.var);
      Universe u = q == quantified.end() ? Universe::Type : q->second;
      auto how = universe_rule(args[i], u, env);
      if (!how)
        throw TypeError(rule, "type " + to_string(args[i]) + " is not in universe " + to_string(u),
                        loc);
      if (log) log->push_back({args[i], u, *how});
      subst.emplace(dom.var, args[i]);
    }
    IT expected = substitute(dom, subst);
    if (expected.kind != IT::Kind::Surface || expected.surface != args[i])
      throw TypeError(rule,
                      "argument " + std::to_string(i + 1) + " has type " + to_string(args[i]) +
                          " but " + to_string(expected) + " is expected",
                      loc);
    current = IT(current.cod());
  }
  IT result = substitute(current, subst);
  if (result.kind != IT::Kind::Surface)
    throw TypeError("app", "operator applied to too few arguments", loc);
  return result.surface;
}

// -- environments -------------------------------------------------------------

Environments build_sigma(const std::vector<EnumDef>& typedefs) {
  Environments env;
  for (const auto& def : typedefs) {
    if (env.enums.count(def.name))
      throw TypeError("typedef", "enum " + def.name + " declared twice", def.loc);
    for (const auto& c : def.constructors) {
      if (env.sigma.count(c))
        throw TypeError("typedef", "constructor " + c + " declared twice", def.loc);
      if (env.enums.count(c) || c == def.name)
        throw TypeError("typedef", "constructor " + c + " clashes with an enum name", def.loc);
      env.sigma.emplace(c, def.name);
    }
    if (env.sigma.count(def.name))
      throw TypeError("typedef", "enum " + def.name + " clashes with a constructor", def.loc);
    env.enums.emplace(def.name, def.constructors);
    env.enum_order.push_back(def.name);
  }
  return env;
}

LamaType constant_type(const Constant& c) {
  switch (c.kind) {
    case Constant::Kind::Bool: return LamaType::boolean();
    case Constant::Kind::Int: return LamaType::integer();
    case Constant::Kind::Real:
      if (c.denominator == 0) throw TypeError("real-const", "zero denominator");
      return LamaType::real();
    case Constant::Kind::SInt: {
      if (c.width < 1) throw TypeError("sint-const", "bit width must be positive");
      Integer half = Integer(1) << static_cast<unsigned>(c.width - 1);
      if (c.value < -half || c.value > half - 1)
        throw TypeError("sint-const",
                        c.value.str() + " is out of range for sint[" + c.width.str() + "]");
      return LamaType::sint(c.width);
    }
    case Constant::Kind::UInt: {
      if (c.width < 1) throw TypeError("uint-const", "bit width must be positive");
      Integer top = (Integer(1) << static_cast<unsigned>(c.width)) - 1;
      if (c.value < 0 || c.value > top)
        throw TypeError("uint-const",
                        c.value.str() + " is out of range for uint[" + c.width.str() + "]");
      return LamaType::uint(c.width);
    }
  }
  return LamaType::boolean();
}

void build_delta(Environments& env, const std::vector<ConstantDef>& constants) {
  for (const auto& c : constants) {
    if (env.delta.count(c.name))
      throw TypeError("constants", "constant " + c.name + " declared twice", c.loc);
    if (env.sigma.count(c.name) || env.enums.count(c.name))
      throw TypeError("constants", "constant " + c.name + " clashes with an enum", c.loc);
    LamaType t;
    try {
      t = constant_type(c.value);
    } catch (const TypeError& e) {
      throw TypeError(e.rule(), e.what(), c.loc);
    }
    env.delta.emplace(c.name, t);
    env.constant_values.emplace(c.name, c.value);
  }
}

// -- expressions --------------------------------------------------------------

namespace {

class ExprTyper {
 public:
  ExprTyper(const Environments& env, const Gamma& gamma, std::vector<UniverseJudgement>* log,
            std::vector<Diagnostic>* warnings)
      : env_(env), gamma_(gamma), log_(log), warnings_(warnings) {}

  LamaType infer(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Constant:
        try {
          return constant_type(e.constant);
        } catch (const TypeError& err) {
          throw TypeError(err.rule(), err.what(), e.loc);
        }
      case Expr::Kind::Var: return lookup(e.name, e.loc);
      case Expr::Kind::Not:
        return instantiate(not_scheme(), {infer(e.args[0])}, env_, e.loc, "unary-bool", log_);
      case Expr::Kind::Binary:
        return instantiate(operator_scheme(e.op), {infer(e.args[0]), infer(e.args[1])}, env_,
                           e.loc, op_rule(e.op), log_);
      case Expr::Kind::Ite:
        return instantiate(ite_scheme(), {infer(e.args[0]), infer(e.args[1]), infer(e.args[2])},
                           env_, e.loc, "ite", log_);
      case Expr::Kind::Tuple: {
        std::vector<LamaType> es;
        for (const auto& a : e.args) es.push_back(infer(a));
        return LamaType::prod(std::move(es));
      }
      case Expr::Kind::Project: {
        LamaType t = lookup(e.name, e.loc);
        if (t.kind != LamaType::Kind::Prod)
          throw TypeError("#-elim", e.name + " has non-product type " + to_string(t), e.loc);
        if (e.index < 0 || e.index >= t.elems.size())
          throw TypeError("#-elim",
                          "projection index " + e.index.str() + " out of range for " + to_string(t),
                          e.loc);
        return t.elems[static_cast<std::size_t>(e.index)];
      }
      case Expr::Kind::Match: return match(e);
    }
    return LamaType::boolean();
  }

 private:
  const Environments& env_;
  const Gamma& gamma_;
  std::vector<UniverseJudgement>* log_;
  std::vector<Diagnostic>* warnings_;

  LamaType lookup(const std::string& n, SourceLoc loc) const {
    if (auto it = gamma_.find(n); it != gamma_.end()) return it->second;
    if (auto it = env_.delta.find(n); it != env_.delta.end()) return it->second;
    if (auto it = env_.sigma.find(n); it != env_.sigma.end()) return LamaType::named(it->second);
    throw TypeError("var", "unknown identifier " + n, loc);
  }

  LamaType match(const Expr& e) {
    LamaType scrutinee = infer(e.args[0]);
    if (scrutinee.kind != LamaType::Kind::Named || !env_.enums.count(scrutinee.name))
      throw TypeError("enum-elim", "match scrutinee has non-enum type " + to_string(scrutinee),
                      e.loc);
    const auto& ctors = env_.enums.at(scrutinee.name);
    std::optional<LamaType> result;
    std::set<std::string> covered;
    bool wildcard = false;
    for (const auto& p : e.patterns) {
      if (p.head) {
        if (std::find(ctors.begin(), ctors.end(), *p.head) == ctors.end())
          throw TypeError("enum-elim",
                          *p.head + " is not a constructor of enum " + scrutinee.name, p.loc);
        covered.insert(*p.head);
      } else {
        wildcard = true;
      }
      LamaType body = infer(p.body);
      if (result && *result != body)
        throw TypeError("enum-elim",
                        "match arms have different types " + to_string(*result) + " and " +
                            to_string(body),
                        p.loc);
      result = body;
    }
    if (!wildcard && covered.size() != ctors.size() && warnings_)
      warnings_->push_back({"enum-elim", "non-exhaustive match over " + scrutinee.name, e.loc});
    return *result;
  }
};

}  // namespace

LamaType infer_expr(const Expr& e, const Environments& env, const Gamma& gamma,
                    std::vector<UniverseJudgement>* log, std::vector<Diagnostic>* warnings) {
  return ExprTyper(env, gamma, log, warnings).infer(e);
}

bool is_constant_expr(const Expr& e, const Environments& env) {
  switch (e.kind) {
    case Expr::Kind::Constant: return true;
    case Expr::Kind::Var: return env.delta.count(e.name) || env.sigma.count(e.name);
    case Expr::Kind::Tuple:
      return std::all_of(e.args.begin(), e.args.end(),
                         [&](const Expr& a) { return is_constant_expr(a, env); });
    default: return false;
  }
}

// -- blocks -----------------------------------------------------------------

namespace {

class BlockChecker {
 public:
  BlockChecker(const Environments& env, std::vector<UniverseJudgement>* log,
               std::vector<Diagnostic>* warnings)
      : env_(env), log_(log), warnings_(warnings) {}

  LamaType check_type(const LamaType& t, SourceLoc loc) const {
    LamaType d;
    try {
      d = desugar_pow_type(t);
    } catch (const MalformedTypeError& e) {
      throw MalformedTypeError(e.what(), loc);
    }
    validate_type(d, loc);
    return d;
  }

  void declare(Scope& s, const TypedVar& v, VarKind kind) const {
    if (s.find_var(v.name))
      throw TypeError("declarations", "variable " + v.name + " declared twice", v.loc);
    if (env_.sigma.count(v.name) || env_.enums.count(v.name))
      throw TypeError("declarations", "variable " + v.name + " clashes with an enum", v.loc);
    if (env_.delta.count(v.name))
      throw TypeError("declarations", "variable " + v.name + " clashes with a constant", v.loc);
    s.vars.push_back({v.name, check_type(v.type, v.loc), kind, v.loc});
  }

  void declare_nodes(Scope& s, const std::vector<Node>& nodes) const {
    for (const auto& n : nodes) {
      if (s.node_signatures.count(n.name) || s.find_var(n.name))
        throw TypeError("declarations", "node " + n.name + " declared twice", n.loc);
      Scope child;
      child.path = s.path.empty() ? n.name : s.path + "." + n.name;
      NodeSignature sig = check_node_into(n, child);
      s.node_signatures.emplace(n.name, sig);
      s.children.push_back(std::move(child));
    }
  }

  NodeSignature check_node_into(const Node& n, Scope& s) const {
    s.name = n.name;
    if (s.path.empty()) s.path = n.name;
    s.node = &n;
    s.flow = &n.flow;
    s.automata = &n.automata;
    s.initial = &n.initial;
    s.assertion = n.assertion ? &*n.assertion : nullptr;
    if (n.returns.empty())
      throw TypeError("node", "node " + n.name + " must return at least one value", n.loc);
    for (const auto& v : n.params) declare(s, v, VarKind::Input);
    for (const auto& v : n.returns) declare(s, v, VarKind::Output);
    for (const auto& v : n.decls.locals) declare(s, v, VarKind::Local);
    for (const auto& v : n.decls.states) declare(s, v, VarKind::State);
    declare_nodes(s, n.decls.nodes);
    check_body(s);
    NodeSignature sig;
    for (const auto& v : s.vars) {
      if (v.kind == VarKind::Input) sig.params.push_back(v.type);
      if (v.kind == VarKind::Output) sig.returns.push_back(v.type);
    }
    return sig;
  }

  void check_body(const Scope& s) const {
    Gamma g = s.gamma();
    check_flow(*s.flow, s, g);
    for (const auto& a : *s.automata) check_automaton(a, s, g);
    for (const auto& i : *s.initial) check_initial(i, s, g);
    if (s.assertion) check_bool(*s.assertion, g, "assertion");
  }

  void check_flow(const Flow& f, const Scope& s, const Gamma& g) const {
    for (const auto& d : f.definitions) {
      const VarInfo* v = s.find_var(d.target);
      if (!v) throw TypeError("definition", "unknown variable " + d.target, d.loc);
      if (v->kind != VarKind::Local && v->kind != VarKind::Output)
        throw TypeError("definition",
                        std::string("cannot define ") + to_string(v->kind) + " variable " + d.target,
                        d.loc);
      LamaType rhs = d.is_node_use() ? check_use(d, s, g) : infer(d.expr(), g);
      if (rhs != v->type)
        throw TypeError(d.is_node_use() ? "use" : "definition",
                        d.target + " has type " + to_string(v->type) + " but is defined with " +
                            to_string(rhs),
                        d.loc);
    }
    for (const auto& t : f.transitions) {
      const VarInfo* v = s.find_var(t.target);
      if (!v) throw TypeError("transition", "unknown variable " + t.target, t.loc);
      if (v->kind != VarKind::State)
        throw TypeError("transition", t.target + " is not a state variable", t.loc);
      LamaType rhs = infer(t.rhs, g);
      if (rhs != v->type)
        throw TypeError("transition",
                        t.target + "' has type " + to_string(v->type) + " but is assigned " +
                            to_string(rhs),
                        t.loc);
    }
  }

  LamaType check_use(const InstantDefinition& d, const Scope& s, const Gamma& g) const {
    const NodeUse& u = d.use();
    auto it = s.node_signatures.find(u.node);
    if (it == s.node_signatures.end())
      throw TypeError("use", "unknown node " + u.node, d.loc);
    const NodeSignature& sig = it->second;
    if (u.args.size() != sig.params.size())
      throw TypeError("use",
                      "node " + u.node + " expects " + std::to_string(sig.params.size()) +
                          " arguments, got " + std::to_string(u.args.size()),
                      d.loc);
    for (std::size_t i = 0; i < u.args.size(); ++i) {
      LamaType a = infer(u.args[i], g);
      if (a != sig.params[i])
        throw TypeError("use",
                        "argument " + std::to_string(i + 1) + " of " + u.node + " has type " +
                            to_string(a) + " but " + to_string(sig.params[i]) + " is expected",
                        u.args[i].loc);
    }
    return sig.result_type();
  }

  void check_automaton(const Automaton& a, const Scope& s, const Gamma& g) const {
    std::set<std::string> names;
    for (const auto& l : a.locations) {
      if (!names.insert(l.name).second)
        throw TypeError("automaton", "location " + l.name + " declared twice", l.loc);
      check_flow(l.flow, s, g);
    }
    if (!names.count(a.initial))
      throw TypeError("automaton", "initial location " + a.initial + " is not declared",
                      a.initial_loc);
    for (const auto& e : a.edges) {
      if (!names.count(e.from) || !names.count(e.to))
        throw TypeError("automaton", "edge (" + e.from + ", " + e.to + ") has an undeclared endpoint",
                        e.loc);
      check_bool(e.cond, g, "edge");
    }
    std::set<std::string> defaulted;
    for (const auto& d : a.defaults) {
      const VarInfo* v = s.find_var(d.target);
      if (!v) throw TypeError("default", "unknown variable " + d.target, d.loc);
      if (v->kind != VarKind::Local && v->kind != VarKind::Output)
        throw TypeError("default", "default for non-local variable " + d.target, d.loc);
      if (!defaulted.insert(d.target).second)
        throw TypeError("default", "two defaults for " + d.target, d.loc);
      LamaType rhs = infer(d.rhs, g);
      if (rhs != v->type)
        throw TypeError("default",
                        d.target + " has type " + to_string(v->type) + " but default is " +
                            to_string(rhs),
                        d.loc);
    }
  }

  void check_initial(const StateInit& i, const Scope& s, const Gamma& g) const {
    const VarInfo* v = s.find_var(i.target);
    if (!v) throw TypeError("initial", "unknown variable " + i.target, i.loc);
    if (v->kind != VarKind::State)
      throw TypeError("initial", i.target + " is not a state variable", i.loc);
    if (!is_constant_expr(i.value, env_))
      throw TypeError("initial", "initial value of " + i.target + " is not constant", i.loc);
    LamaType t = infer(i.value, g);
    if (t != v->type)
      throw TypeError("initial",
                      i.target + " has type " + to_string(v->type) + " but is initialized with " +
                          to_string(t),
                      i.loc);
  }

  void check_bool(const Expr& e, const Gamma& g, const char* rule) const {
    LamaType t = infer(e, g);
    if (t != LamaType::boolean())
      throw TypeError(rule, std::string(rule) + " must have type bool, not " + to_string(t), e.loc);
  }

  LamaType infer(const Expr& e, const Gamma& g) const {
    return infer_expr(e, env_, g, log_, warnings_);
  }

 private:
  const Environments& env_;
  std::vector<UniverseJudgement>* log_;
  std::vector<Diagnostic>* warnings_;

  void validate_type(const LamaType& t, SourceLoc loc) const {
    switch (t.kind) {
      case LamaType::Kind::SInt:
      case LamaType::Kind::UInt:
        if (t.width < 1) throw MalformedTypeError("bit width must be positive", loc);
        break;
      case LamaType::Kind::Named:
        if (!env_.enums.count(t.name)) throw TypeError("type", "unknown type " + t.name, loc);
        break;
      case LamaType::Kind::Prod:
        if (t.elems.empty()) throw MalformedTypeError("empty product type", loc);
        for (const auto& e : t.elems) validate_type(e, loc);
        break;
      default:
        break;
    }
  }
};

void desugar_decls(Declarations& d);

void desugar_vars(std::vector<TypedVar>& vs) {
  for (auto& v : vs) {
    try {
      v.type = desugar_pow_type(v.type);
    } catch (const MalformedTypeError& e) {
      throw MalformedTypeError(e.what(), v.loc);
    }
  }
}

void desugar_decls(Declarations& d) {
  desugar_vars(d.locals);
  desugar_vars(d.states);
  for (auto& n : d.nodes) {
    desugar_vars(n.params);
    desugar_vars(n.returns);
    desugar_decls(n.decls);
  }
}

}  // namespace

NodeSignature check_node(const Node& n, const Environments& env, Scope* out,
                         std::vector<UniverseJudgement>* log, std::vector<Diagnostic>* warnings) {
  BlockChecker checker(env, log, warnings);
  Scope local;
  NodeSignature sig = checker.check_node_into(n, out ? *out : local);
  return sig;
}

CheckedProgram check_program(const Program& source) {
  auto prog = std::make_shared<Program>(source);
  desugar_vars(prog->inputs);
  desugar_decls(prog->decls);

  CheckedProgram cp;
  cp.program = prog;
  cp.env = build_sigma(prog->typedefs);
  build_delta(cp.env, prog->constants);

  BlockChecker checker(cp.env, &cp.judgements, &cp.warnings);
  Scope& top = cp.top;
  top.flow = &prog->flow;
  static const std::vector<Automaton> no_automata;
  top.automata = &no_automata;
  top.initial = &prog->initial;
  top.assertion = prog->assertion ? &*prog->assertion : nullptr;
  for (const auto& v : prog->inputs) checker.declare(top, v, VarKind::Input);
  for (const auto& v : prog->decls.locals) checker.declare(top, v, VarKind::Local);
  for (const auto& v : prog->decls.states) checker.declare(top, v, VarKind::State);
  checker.declare_nodes(top, prog->decls.nodes);
  checker.check_body(top);
  if (prog->invariant) {
    checker.check_bool(*prog->invariant, top.gamma(), "invariant");
    cp.invariant = &*prog->invariant;
  }
  return cp;
}

}  // namespace lama
