#include "lama/smt_encode.hpp"

#include "lama/deps.hpp"
#include "lama/error.hpp"
#include "lama/interp.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace lama {

std::string to_string(const EncodingConfig& c) {
  return std::string(c.nat == NatEncoding::Datatype ? "nat=datatype" : "nat=integer") + "," +
         (c.enums == EnumEncoding::Datatype ? "enum=datatype" : "enum=bitvector");
}

namespace {

constexpr const char* kIndex = "n";

bool is_location_sort(const std::string& key) { return key.rfind("Loc$", 0) == 0; }

std::string enum_sort_name(const std::string& key) {
  return is_location_sort(key) ? key : "enum$" + key;
}

std::string ctor_symbol(const std::string& key, const std::string& ctor) {
  return enum_sort_name(key) + "$" + ctor;
}

unsigned bit_width(std::size_t k) {
  unsigned w = 1;
  while ((std::size_t{1} << w) < k) ++w;
  return w;
}

Sexpr bv_literal(std::size_t i, unsigned w) {
  return app("_", {Sexpr("bv" + std::to_string(i)), Sexpr(std::to_string(w))});
}

Sexpr int_literal(const Integer& i) {
  if (i < 0) return app("-", {Sexpr(Integer(-i).str())});
  return Sexpr(i.str());
}

Sexpr real_literal(const Rational& q) {
  Integer num = numerator(q), den = denominator(q);
  Integer mag = num < 0 ? Integer(-num) : num;
  Sexpr body = den == 1 ? Sexpr(mag.str() + ".0")
                        : app("/", {Sexpr(mag.str() + ".0"), Sexpr(den.str() + ".0")});
  return num < 0 ? app("-", {body}) : body;
}

// Value-level term: a leaf formula or a tuple of terms.
struct Term {
  Sexpr leaf;
  std::vector<Term> elems;

  bool is_leaf() const { return elems.empty(); }
  static Term tuple(std::vector<Term> es) {
    Term t;
    t.elems = std::move(es);
    return t;
  }
};

Sexpr term_eq(const Term& a, const Term& b) {
  if (a.is_leaf()) return mk_eq(a.leaf, b.leaf);
  std::vector<Sexpr> parts;
  for (std::size_t i = 0; i < a.elems.size(); ++i) parts.push_back(term_eq(a.elems[i], b.elems[i]));
  return parts.size() == 1 ? parts.front() : app("and", std::move(parts));
}

Term term_ite(const Sexpr& c, const Term& a, const Term& b) {
  if (a.is_leaf()) return Term{app("ite", {c, a.leaf, b.leaf}), {}};
  std::vector<Term> es;
  for (std::size_t i = 0; i < a.elems.size(); ++i) es.push_back(term_ite(c, a.elems[i], b.elems[i]));
  return Term::tuple(std::move(es));
}

Term lift(const StreamTerm& s, const Sexpr& idx) {
  if (s.is_leaf()) return Term{app(s.stream, {idx}), {}};
  std::vector<Term> es;
  for (const auto& e : s.elems) es.push_back(lift(e, idx));
  return Term::tuple(std::move(es));
}

Term value_term(const Value& v, const EncodedSystem& sys) {
  if (v.kind == Value::Kind::Tuple) {
    std::vector<Term> es;
    for (const auto& e : v.elems) es.push_back(value_term(e, sys));
    return Term::tuple(std::move(es));
  }
  return Term{sys.literal(v), {}};
}

class Encoder {
 public:
  Encoder(const CheckedProgram& p, EncodingConfig cfg) : p_(p) {
    sys_.config = cfg;
    sys_.env = &p.env;
    sys_.program = &p;
    for (const auto& e : p.env.enum_order) sys_.enum_ctors[e] = p.env.enums.at(e);
  }

  EncodedSystem run(const Expr* invariant) {
    if (sys_.config.nat == NatEncoding::Datatype)
      sys_.sort_decls.push_back("(declare-datatypes ((Nat 0)) (((zero) (succ (pred Nat)))))");
    for (const auto& e : p_.env.enum_order) declare_enum_sort(e);

    Scope_ top{&p_.top, "top", {}};
    encode_scope(top, Sexpr("true"));

    const Expr* inv = invariant ? invariant : p_.invariant;
    if (inv) {
      sys_.property = expr(*inv, top, Sexpr(kIndex)).leaf;
    } else {
      sys_.property = Sexpr("true");
      sys_.warnings.push_back("program has no invariant; the property is `true`");
    }
    sys_.init = mk_and(std::move(init_));
    sys_.step = mk_and(std::move(step_));
    sys_.assertion = mk_and(std::move(assume_));
    return std::move(sys_);
  }

 private:
  struct Scope_ {
    const Scope* scope;
    std::string prefix;
    std::map<std::string, StreamTerm> streams;
  };

  const CheckedProgram& p_;
  EncodedSystem sys_;
  std::vector<Sexpr> init_, step_, assume_;

  void declare_enum_sort(const std::string& key) {
    if (sys_.config.enums != EnumEncoding::Datatype) return;
    std::string decl = "(declare-datatypes ((" + enum_sort_name(key) + " 0)) ((";
    const auto& ctors = sys_.enum_ctors.at(key);
    for (std::size_t i = 0; i < ctors.size(); ++i)
      decl += (i ? " (" : "(") + ctor_symbol(key, ctors[i]) + ")";
    decl += ")))";
    sys_.sort_decls.push_back(decl);
  }

  Sexpr sort_of(const LamaType& t) {
    switch (t.kind) {
      case LamaType::Kind::Bool: return Sexpr("Bool");
      case LamaType::Kind::Int: return Sexpr("Int");
      case LamaType::Kind::Real: return Sexpr("Real");
      case LamaType::Kind::Named: {
        if (sys_.config.enums == EnumEncoding::Datatype) return Sexpr(enum_sort_name(t.name));
        return app("_", {Sexpr("BitVec"), Sexpr(std::to_string(bit_width(sys_.enum_ctors.at(t.name).size())))});
      }
      default:
        throw UnsupportedTypeError("type " + to_string(t) + " cannot be encoded");
    }
  }

  StreamTerm declare(const std::string& name, const LamaType& t) {
    StreamTerm st;
    if (t.kind == LamaType::Kind::Prod) {
      for (std::size_t i = 0; i < t.elems.size(); ++i)
        st.elems.push_back(declare(name + "$" + std::to_string(i), t.elems[i]));
      return st;
    }
    st.stream = name;
    st.type = t;
    sys_.streams.push_back({name, sort_of(t), t});
    sys_.stream_names.insert(name);
    if (t.kind == LamaType::Kind::Named && sys_.config.enums == EnumEncoding::Bitvector) {
      std::size_t k = sys_.enum_ctors.at(t.name).size();
      unsigned w = bit_width(k);
      if (k < (std::size_t{1} << w))
        step_.push_back(app("bvult", {app(name, {Sexpr(kIndex)}), bv_literal(k, w)}));
    }
    return st;
  }

  Sexpr next_index() const { return sys_.offset(Sexpr(kIndex), 1); }

  Sexpr location_literal(const std::string& key, const std::string& loc) const {
    return sys_.literal(Value::of_enum(key, loc));
  }

  // -- expressions --------------------------------------------------------

  Term expr(const Expr& e, const Scope_& s, const Sexpr& idx) {
    switch (e.kind) {
      case Expr::Kind::Constant: return Term{sys_.literal(constant_value(e.constant)), {}};
      case Expr::Kind::Var: {
        if (auto it = s.streams.find(e.name); it != s.streams.end()) return lift(it->second, idx);
        return value_term(eval_expr(e, {}, p_.env), sys_);
      }
      case Expr::Kind::Not: return Term{app("not", {expr(e.args[0], s, idx).leaf}), {}};
      case Expr::Kind::Binary: {
        Term a = expr(e.args[0], s, idx), b = expr(e.args[1], s, idx);
        if (e.op == BinOp::Eq) return Term{term_eq(a, b), {}};
        return Term{app(to_string(e.op), {a.leaf, b.leaf}), {}};
      }
      case Expr::Kind::Ite:
        return term_ite(expr(e.args[0], s, idx).leaf, expr(e.args[1], s, idx), expr(e.args[2], s, idx));
      case Expr::Kind::Tuple: {
        std::vector<Term> es;
        for (const auto& a : e.args) es.push_back(expr(a, s, idx));
        return Term::tuple(std::move(es));
      }
      case Expr::Kind::Project:
        return lift(s.streams.at(e.name).elems.at(static_cast<std::size_t>(e.index)), idx);
      case Expr::Kind::Match: {
        Term scrutinee = expr(e.args[0], s, idx);
        std::vector<std::pair<std::optional<std::string>, Term>> arms;
        for (const auto& p : e.patterns) arms.push_back({p.head, expr(p.body, s, idx)});
        // The last arm, or the first wildcard, terminates the chain unguarded.
        std::size_t last = arms.size() - 1;
        for (std::size_t i = 0; i < arms.size(); ++i)
          if (!arms[i].first) {
            last = i;
            break;
          }
        Term out = arms[last].second;
        for (std::size_t i = last; i-- > 0;) {
          const std::string& ctor = *arms[i].first;
          Sexpr guard = mk_eq(scrutinee.leaf, sys_.literal(Value::of_enum(p_.env.sigma.at(ctor), ctor)));
          out = term_ite(guard, arms[i].second, out);
        }
        return out;
      }
    }
    return Term{};
  }

  // -- scopes -------------------------------------------------------------

  Term use_node(const InstantDefinition& d, Scope_& s, const Sexpr& E) {
    const NodeUse& u = d.use();
    const Scope& child = *s.scope->find_child(u.node);
    Scope_ cs{&child, s.prefix + "$" + u.node, {}};
    encode_scope(cs, E);
    const NodeInterface& iface = sys_.delta.nodes.at(child.path);
    for (std::size_t i = 0; i < u.args.size(); ++i)
      step_.push_back(mk_implies(E, term_eq(lift(iface.inputs[i], Sexpr(kIndex)),
                                            expr(u.args[i], s, Sexpr(kIndex)))));
    std::vector<Term> outs;
    for (const auto& o : iface.outputs) outs.push_back(lift(o, Sexpr(kIndex)));
    return outs.size() == 1 ? outs.front() : Term::tuple(std::move(outs));
  }

  Term definition_rhs(const InstantDefinition& d, Scope_& s, const Sexpr& E) {
    if (d.is_node_use()) return use_node(d, s, E);
    return expr(d.expr(), s, Sexpr(kIndex));
  }

  void frame(const StreamTerm& x, const Sexpr& E) {
    if (E.is("true")) return;
    step_.push_back(mk_implies(mk_not(E), term_eq(lift(x, next_index()), lift(x, Sexpr(kIndex)))));
  }

  void encode_scope(Scope_& s, const Sexpr& E) {
    const Scope& sc = *s.scope;
    sys_.delta.activations[sc.path] = E;
    NodeInterface iface;
    iface.activation = E;
    for (const auto& v : sc.vars) {
      StreamTerm st = declare(s.prefix + "$" + v.name, v.type);
      s.streams[v.name] = st;
      sys_.delta.vars[sc.qualify(v.name)] = st;
      if (v.kind == VarKind::Input) iface.inputs.push_back(st);
      if (v.kind == VarKind::Output) iface.outputs.push_back(st);
    }
    if (!sc.path.empty()) sys_.delta.nodes[sc.path] = iface;

    std::vector<AutomatonStreams> automata;
    for (std::size_t a = 0; a < sc.automata->size(); ++a) {
      const Automaton& aut = (*sc.automata)[a];
      std::string id = sc.qualify(std::to_string(a));
      std::string key = "Loc$" + (sc.path.empty() ? std::string("top") : sc.path) + "$" + std::to_string(a);
      std::replace(key.begin(), key.end(), '.', '$');
      AutomatonStreams as;
      as.sort = key;
      for (const auto& l : aut.locations) as.locations.push_back(l.name);
      sys_.enum_ctors[key] = as.locations;
      declare_enum_sort(key);
      std::string base = s.prefix + "$" + std::to_string(a);
      as.s = declare(base + "$s", LamaType::named(key)).stream;
      as.s1 = declare(base + "$s1", LamaType::named(key)).stream;
      as.activation = E;
      sys_.delta.automata[id] = as;
      automata.push_back(as);
    }

    for (const auto& d : sc.flow->definitions) {
      Term rhs = definition_rhs(d, s, E);
      step_.push_back(mk_implies(E, term_eq(lift(s.streams.at(d.target), Sexpr(kIndex)), rhs)));
    }
    for (const auto& t : sc.flow->transitions) {
      const StreamTerm& x = s.streams.at(t.target);
      step_.push_back(mk_implies(E, term_eq(lift(x, next_index()), expr(t.rhs, s, Sexpr(kIndex)))));
      frame(x, E);
    }

    for (std::size_t a = 0; a < sc.automata->size(); ++a) encode_automaton((*sc.automata)[a], automata[a], s, E);

    for (const auto& i : *sc.initial)
      init_.push_back(term_eq(lift(s.streams.at(i.target), sys_.index(0)), expr(i.value, s, sys_.index(0))));
    if (sc.assertion) assume_.push_back(mk_implies(E, expr(*sc.assertion, s, Sexpr(kIndex)).leaf));
  }

  void encode_automaton(const Automaton& aut, const AutomatonStreams& as, Scope_& s, const Sexpr& E) {
    const Sexpr n(kIndex);
    Sexpr s_n = app(as.s, {n}), s1_n = app(as.s1, {n});

    // s(n) = next(s1, edges)(n)
    Sexpr dispatch;
    for (std::size_t li = aut.locations.size(); li-- > 0;) {
      const std::string& m = aut.locations[li].name;
      Sexpr inner = location_literal(as.sort, m);
      std::vector<const Edge*> out;
      for (const auto& e : aut.edges)
        if (e.from == m) out.push_back(&e);
      for (std::size_t k = out.size(); k-- > 0;)
        inner = app("ite", {expr(out[k]->cond, s, n).leaf, location_literal(as.sort, out[k]->to), inner});
      dispatch = li + 1 == aut.locations.size()
                     ? inner
                     : app("ite", {mk_eq(s1_n, location_literal(as.sort, m)), inner, dispatch});
    }
    step_.push_back(mk_eq(s_n, dispatch));
    step_.push_back(mk_implies(E, mk_eq(app(as.s1, {next_index()}), s_n)));
    if (!E.is("true"))
      step_.push_back(mk_implies(mk_not(E), mk_eq(app(as.s1, {next_index()}), s1_n)));
    init_.push_back(mk_eq(app(as.s1, {sys_.index(0)}), location_literal(as.sort, aut.initial)));

    auto in_mode = [&](const std::string& m) {
      return mk_and({E, mk_eq(s_n, location_literal(as.sort, m))});
    };

    // gather: managed variables in declaration order
    const Scope& sc = *s.scope;
    for (const auto& v : sc.vars) {
      bool is_state = v.kind == VarKind::State;
      const Default* dflt = nullptr;
      for (const auto& d : aut.defaults)
        if (d.target == v.name) dflt = &d;
      std::vector<std::pair<std::string, Term>> arms;
      for (const auto& loc : aut.locations) {
        if (is_state) {
          for (const auto& t : loc.flow.transitions)
            if (t.target == v.name) arms.push_back({loc.name, expr(t.rhs, s, n)});
        } else {
          for (const auto& d : loc.flow.definitions)
            if (d.target == v.name) arms.push_back({loc.name, definition_rhs(d, s, in_mode(loc.name))});
        }
      }
      if (arms.empty() && !dflt) continue;
      Term chain = dflt ? expr(dflt->rhs, s, n) : arms.back().second;
      std::size_t guarded = dflt ? arms.size() : arms.size() - 1;
      for (std::size_t i = guarded; i-- > 0;)
        chain = term_ite(mk_eq(s_n, location_literal(as.sort, arms[i].first)), arms[i].second, chain);
      const StreamTerm& x = s.streams.at(v.name);
      if (is_state) {
        step_.push_back(mk_implies(E, term_eq(lift(x, next_index()), chain)));
        frame(x, E);
      } else {
        step_.push_back(mk_implies(E, term_eq(lift(x, n), chain)));
      }
    }
  }
};

Sexpr rename_rec(const Sexpr& t, const std::set<std::string>& names, const std::string& prefix) {
  if (t.is_atom) return names.count(t.atom) ? Sexpr(prefix + t.atom) : t;
  std::vector<Sexpr> items;
  items.reserve(t.list.size());
  for (const auto& i : t.list) items.push_back(rename_rec(i, names, prefix));
  return Sexpr::make_list(std::move(items));
}

Integer parse_integer_atom(const std::string& s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw SolverError("expected a numeral, got " + s);
  return Integer(s);
}

Rational parse_decimal(const std::string& s) {
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rational(parse_integer_atom(s));
  std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
  Integer scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  Integer w = whole.empty() ? Integer(0) : parse_integer_atom(whole);
  Integer f = frac.empty() ? Integer(0) : parse_integer_atom(frac);
  return Rational(w * scale + f, scale);
}

Rational decode_real(const Sexpr& s) {
  if (s.is_atom) return parse_decimal(s.atom);
  if (s.list.size() == 2 && s.list[0].is("-")) return -decode_real(s.list[1]);
  if (s.list.size() == 3 && s.list[0].is("/")) {
    Rational d = decode_real(s.list[2]);
    if (d == 0) throw SolverError("zero denominator in solver value " + s.str());
    return decode_real(s.list[1]) / d;
  }
  if (s.list.size() == 2 && s.list[0].is("to_real")) return decode_real(s.list[1]);
  throw SolverError("cannot read real value " + s.str());
}

Integer decode_int(const Sexpr& s) {
  if (s.is_atom) return parse_integer_atom(s.atom);
  if (s.list.size() == 2 && s.list[0].is("-")) return -decode_int(s.list[1]);
  throw SolverError("cannot read integer value " + s.str());
}

std::size_t decode_bv(const Sexpr& s) {
  if (s.is_atom && s.atom.size() > 2 && s.atom[0] == '#') {
    int base = s.atom[1] == 'b' ? 2 : s.atom[1] == 'x' ? 16 : 0;
    if (base) return std::stoul(s.atom.substr(2), nullptr, base);
  }
  if (!s.is_atom && s.list.size() == 3 && s.list[0].is("_") && s.list[1].is_atom &&
      s.list[1].atom.rfind("bv", 0) == 0)
    return std::stoul(s.list[1].atom.substr(2));
  throw SolverError("cannot read bitvector value " + s.str());
}

}  // namespace

// -- EncodedSystem --------------------------------------------------------

Sexpr EncodedSystem::index_sort() const {
  return Sexpr(config.nat == NatEncoding::Datatype ? "Nat" : "Int");
}

Sexpr EncodedSystem::index(long i) const {
  if (config.nat == NatEncoding::Integer) return Sexpr(std::to_string(i));
  Sexpr t("zero");
  for (long k = 0; k < i; ++k) t = app("succ", {t});
  return t;
}

Sexpr EncodedSystem::offset(const Sexpr& base, long k) const {
  if (k == 0) return base;
  if (config.nat == NatEncoding::Integer) return app("+", {base, Sexpr(std::to_string(k))});
  Sexpr t = base;
  for (long i = 0; i < k; ++i) t = app("succ", {t});
  return t;
}

Sexpr EncodedSystem::rename(const Sexpr& term, const std::string& prefix) const {
  if (prefix.empty()) return term;
  return rename_rec(term, stream_names, prefix);
}

std::vector<std::string> EncodedSystem::declarations(const std::string& prefix) const {
  std::vector<std::string> out;
  std::string nat = index_sort().str();
  for (const auto& s : streams)
    out.push_back("(declare-fun " + prefix + s.name + " (" + nat + ") " + s.sort.str() + ")");
  auto define = [&](const std::string& name, bool indexed, const Sexpr& body) {
    out.push_back("(define-fun " + prefix + name + " (" +
                  (indexed ? std::string("(") + kIndex + " " + nat + ")" : std::string()) +
                  ") Bool " + rename(body, prefix).str() + ")");
  };
  define("init", false, init);
  define("trans", true, step);
  define("assume", true, assertion);
  define("prop", true, property);
  return out;
}

Sexpr EncodedSystem::init_at(const std::string& prefix) const { return Sexpr(prefix + "init"); }

Sexpr EncodedSystem::step_at(const std::string& prefix, const Sexpr& idx) const {
  return app(prefix + "trans", {idx});
}

Sexpr EncodedSystem::assertion_at(const std::string& prefix, const Sexpr& idx) const {
  return app(prefix + "assume", {idx});
}

Sexpr EncodedSystem::property_at(const std::string& prefix, const Sexpr& idx) const {
  return app(prefix + "prop", {idx});
}

Sexpr EncodedSystem::literal(const Value& v) const {
  switch (v.kind) {
    case Value::Kind::Bool: return Sexpr(v.boolean ? "true" : "false");
    case Value::Kind::Int: return int_literal(v.integer);
    case Value::Kind::Real: return real_literal(v.rational);
    case Value::Kind::Enum: {
      const auto& ctors = enum_ctors.at(v.enum_name);
      if (config.enums == EnumEncoding::Datatype) return Sexpr(ctor_symbol(v.enum_name, v.constructor));
      auto pos = static_cast<std::size_t>(std::find(ctors.begin(), ctors.end(), v.constructor) - ctors.begin());
      return bv_literal(pos, bit_width(ctors.size()));
    }
    case Value::Kind::SInt:
    case Value::Kind::UInt:
      throw UnsupportedTypeError("fixed-width integers cannot be encoded");
    case Value::Kind::Tuple:
      throw UnsupportedTypeError("tuples are encoded per component");
  }
  return Sexpr("false");
}

Value EncodedSystem::decode(const Sexpr& s, const LamaType& t) const {
  switch (t.kind) {
    case LamaType::Kind::Bool:
      if (s.is("true")) return Value::of_bool(true);
      if (s.is("false")) return Value::of_bool(false);
      throw SolverError("cannot read boolean value " + s.str());
    case LamaType::Kind::Int: return Value::of_int(decode_int(s));
    case LamaType::Kind::Real: return Value::of_real(decode_real(s));
    case LamaType::Kind::Named: {
      const auto& ctors = enum_ctors.at(t.name);
      if (config.enums == EnumEncoding::Datatype) {
        for (const auto& c : ctors)
          if (s.is(ctor_symbol(t.name, c))) return Value::of_enum(t.name, c);
        throw SolverError("unknown constructor " + s.str() + " for " + t.name);
      }
      std::size_t i = decode_bv(s);
      if (i >= ctors.size()) throw SolverError("bitvector " + s.str() + " out of range for " + t.name);
      return Value::of_enum(t.name, ctors[i]);
    }
    default:
      throw UnsupportedTypeError("type " + to_string(t) + " cannot be decoded");
  }
}

Sexpr EncodedSystem::bind(const StreamTerm& term, const Value& v, const Sexpr& idx,
                          const std::string& prefix) const {
  if (term.is_leaf()) return mk_eq(app(prefix + term.stream, {idx}), literal(v));
  std::vector<Sexpr> parts;
  for (std::size_t i = 0; i < term.elems.size(); ++i)
    parts.push_back(bind(term.elems[i], v.elems.at(i), idx, prefix));
  return mk_and(std::move(parts));
}

EncodedSystem encode_program(const CheckedProgram& p, EncodingConfig cfg, const Expr* invariant) {
  std::function<void(const Scope&)> check = [&](const Scope& s) {
    check_use_once(s);
    for (const auto& c : s.children) check(c);
  };
  check(p.top);
  return Encoder(p, cfg).run(invariant);
}

std::string dump_script(const EncodedSystem& sys, const std::string& logic, long depth) {
  std::ostringstream out;
  out << "; " << to_string(sys.config) << "\n";
  out << "(set-logic " << logic << ")\n";
  for (const auto& d : sys.sort_decls) out << d << "\n";
  for (const auto& d : sys.declarations("")) out << d << "\n";
  out << "(assert " << sys.init_at("").str() << ")\n";
  for (long k = 0; k <= depth; ++k) {
    out << "(assert " << sys.step_at("", sys.index(k)).str() << ")\n";
    out << "(assert " << sys.assertion_at("", sys.index(k)).str() << ")\n";
  }
  out << "(assert (not " << sys.property_at("", sys.index(depth)).str() << "))\n";
  out << "(check-sat)\n";
  return out.str();
}

}  // namespace lama
