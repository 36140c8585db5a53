#include "lama/error.hpp"
#include "lama/parser.hpp"

#include <initializer_list>
#include <map>

namespace lama {

namespace {

const std::map<std::string, BinOp>& binop_table() {
  static const std::map<std::string, BinOp> table = {
      {"or", BinOp::Or},    {"and", BinOp::And},     {"xor", BinOp::Xor},
      {"=>", BinOp::Implies}, {"=", BinOp::Eq},      {"<", BinOp::Lt},
      {">", BinOp::Gt},     {"<=", BinOp::Le},       {">=", BinOp::Ge},
      {"+", BinOp::Plus},   {"-", BinOp::Minus},     {"*", BinOp::Mul},
      {"/", BinOp::RealDiv}, {"div", BinOp::IntDiv}, {"mod", BinOp::Mod}};
  return table;
}

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {
    end_.kind = Token::Kind::End;
    end_.text = "<end of input>";
    if (!toks_.empty()) end_.loc = toks_.back().loc;
  }

  Program program() {
    Program p;
    p.typedefs = typedefs();
    p.constants = constant_defs();
    if (accept_kw("input")) p.inputs = var_decls();
    p.decls = declarations();
    p.flow = flow();
    p.initial = initial();
    if (accept_kw("assertion")) {
      p.assertion = expr();
      expect_sym(";");
    }
    if (accept_kw("invariant")) {
      p.invariant = expr();
      expect_sym(";");
    }
    expect_end();
    return p;
  }

  Expr whole_expr() {
    Expr e = expr();
    expect_end();
    return e;
  }

  Constant whole_constant() {
    Constant c = constant();
    expect_end();
    return c;
  }

  LamaType whole_type() {
    LamaType t = type();
    expect_end();
    return t;
  }

 private:
  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
  Token end_;

  const Token& peek(std::size_t ahead = 0) const {
    if (pos_ + ahead < toks_.size()) return toks_[pos_ + ahead];
    return end_;
  }

  bool is_kw(const std::string& w, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Keyword && t.text == w;
  }

  bool is_sym(const std::string& s, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Symbol && t.text == s;
  }

  bool is_kind(Token::Kind k, std::size_t ahead = 0) const { return peek(ahead).kind == k; }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    throw ParseError("syntax", "expected " + expected + " but found '" + t.text + "'", t.loc);
  }

  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size()) ++pos_;
    return t;
  }

  bool accept_kw(const std::string& w) {
    if (!is_kw(w)) return false;
    ++pos_;
    return true;
  }

  bool accept_sym(const std::string& s) {
    if (!is_sym(s)) return false;
    ++pos_;
    return true;
  }

  void expect_kw(const std::string& w) {
    if (!accept_kw(w)) fail("'" + w + "'");
  }

  void expect_sym(const std::string& s) {
    if (!accept_sym(s)) fail("'" + s + "'");
  }

  void expect_end() {
    if (pos_ != toks_.size()) fail("end of input");
  }

  std::pair<std::string, SourceLoc> ident() {
    if (!is_kind(Token::Kind::Identifier)) fail("identifier");
    const Token& t = next();
    return {t.text, t.loc};
  }

  Integer natural() {
    if (!is_kind(Token::Kind::Integer)) fail("natural number");
    return Integer(next().text);
  }

  // -- declarations -------------------------------------------------------

  std::vector<EnumDef> typedefs() {
    std::vector<EnumDef> out;
    if (!accept_kw("typedef")) return out;
    do {
      SourceLoc loc = peek().loc;
      expect_kw("enum");
      EnumDef def;
      def.loc = loc;
      def.name = ident().first;
      expect_sym("=");
      expect_sym("{");
      def.constructors.push_back(ident().first);
      while (accept_sym(",")) def.constructors.push_back(ident().first);
      expect_sym("}");
      expect_sym(";");
      out.push_back(std::move(def));
    } while (is_kw("enum"));
    return out;
  }

  std::vector<ConstantDef> constant_defs() {
    std::vector<ConstantDef> out;
    if (!accept_kw("constants")) return out;
    do {
      auto [name, loc] = ident();
      expect_sym("=");
      Constant c = constant();
      expect_sym(";");
      out.push_back({name, std::move(c), loc});
    } while (is_kind(Token::Kind::Identifier));
    return out;
  }

  void typed_vars(std::vector<TypedVar>& out) {
    std::vector<std::pair<std::string, SourceLoc>> names;
    names.push_back(ident());
    while (accept_sym(",")) names.push_back(ident());
    expect_sym(":");
    LamaType t = type();
    for (auto& [n, l] : names) out.push_back({n, t, l});
  }

  std::vector<TypedVar> var_decls() {
    std::vector<TypedVar> out;
    do {
      typed_vars(out);
      expect_sym(";");
    } while (is_kind(Token::Kind::Identifier));
    return out;
  }

  std::vector<TypedVar> list_typed_var() {
    std::vector<TypedVar> out;
    typed_vars(out);
    while (accept_sym(",")) typed_vars(out);
    return out;
  }

  Declarations declarations() {
    Declarations d;
    if (accept_kw("nodes")) {
      do {
        d.nodes.push_back(node());
      } while (is_kw("node"));
    }
    if (accept_kw("local")) d.locals = var_decls();
    if (accept_kw("state")) d.states = var_decls();
    return d;
  }

  Node node() {
    Node n;
    n.loc = peek().loc;
    expect_kw("node");
    n.name = ident().first;
    expect_sym("(");
    if (!is_sym(")")) n.params = list_typed_var();
    expect_sym(")");
    expect_kw("returns");
    expect_sym("(");
    n.returns = list_typed_var();
    expect_sym(")");
    expect_sym(";");
    expect_kw("let");
    n.decls = declarations();
    n.flow = flow();
    while (is_kw("automaton")) n.automata.push_back(automaton());
    n.initial = initial();
    if (accept_kw("assertion")) {
      n.assertion = expr();
      expect_sym(";");
    }
    expect_kw("tel");
    return n;
  }

  // -- flow ---------------------------------------------------------------

  Flow flow() {
    Flow f;
    if (accept_kw("definition")) {
      do {
        f.definitions.push_back(instant_definition());
        expect_sym(";");
      } while (is_kind(Token::Kind::Identifier));
    }
    if (accept_kw("transition")) {
      do {
        if (!is_kind(Token::Kind::StateId)) fail("state identifier (x')");
        const Token& t = next();
        Transition tr;
        tr.target = t.text.substr(0, t.text.size() - 1);
        tr.loc = t.loc;
        expect_sym("=");
        tr.rhs = expr();
        expect_sym(";");
        f.transitions.push_back(std::move(tr));
      } while (is_kind(Token::Kind::StateId));
    }
    return f;
  }

  InstantDefinition instant_definition() {
    InstantDefinition d;
    auto [name, loc] = ident();
    d.target = name;
    d.loc = loc;
    expect_sym("=");
    if (is_sym("(") && is_kw("use", 1)) {
      next();
      next();
      NodeUse u;
      u.node = ident().first;
      while (!is_sym(")")) {
        if (is_kind(Token::Kind::End)) fail("')'");
        u.args.push_back(expr());
      }
      expect_sym(")");
      d.rhs = std::move(u);
    } else {
      d.rhs = expr();
    }
    return d;
  }

  Automaton automaton() {
    Automaton a;
    a.loc = peek().loc;
    expect_kw("automaton");
    expect_kw("let");
    do {
      Location l;
      l.loc = peek().loc;
      expect_kw("location");
      l.name = ident().first;
      expect_kw("let");
      l.flow = flow();
      expect_kw("tel");
      a.locations.push_back(std::move(l));
    } while (is_kw("location"));
    expect_kw("initial");
    auto [init, init_loc] = ident();
    a.initial = init;
    a.initial_loc = init_loc;
    expect_sym(";");
    while (is_kw("edge")) {
      Edge e;
      e.loc = next().loc;
      expect_sym("(");
      e.from = ident().first;
      expect_sym(",");
      e.to = ident().first;
      expect_sym(")");
      expect_sym(":");
      e.cond = expr();
      expect_sym(";");
      e.priority = a.edges.size();
      a.edges.push_back(std::move(e));
    }
    if (accept_kw("default")) {
      do {
        auto [name, loc] = ident();
        expect_sym("=");
        Expr rhs = expr();
        expect_sym(";");
        a.defaults.push_back({name, std::move(rhs), loc});
      } while (is_kind(Token::Kind::Identifier));
    }
    expect_kw("tel");
    return a;
  }

  std::vector<StateInit> initial() {
    std::vector<StateInit> out;
    if (!accept_kw("initial")) return out;
    do {
      auto [name, loc] = ident();
      expect_sym("=");
      out.push_back({name, expr(), loc});
    } while (accept_sym(","));
    expect_sym(";");
    return out;
  }

  // -- types --------------------------------------------------------------

  LamaType type() {
    if (is_sym("(")) {
      next();
      expect_sym("#");
      std::vector<LamaType> es;
      do {
        es.push_back(type());
      } while (!is_sym(")") && !is_kind(Token::Kind::End));
      expect_sym(")");
      return LamaType::prod(std::move(es));
    }
    if (is_kind(Token::Kind::Identifier)) return LamaType::named(ident().first);
    LamaType base;
    if (accept_kw("bool")) {
      base = LamaType::boolean();
    } else if (accept_kw("int")) {
      base = LamaType::integer();
    } else if (accept_kw("real")) {
      base = LamaType::real();
    } else if (is_kw("sint") || is_kw("uint")) {
      bool is_signed = next().text == "sint";
      expect_sym("[");
      Integer n = natural();
      expect_sym("]");
      base = is_signed ? LamaType::sint(n) : LamaType::uint(n);
    } else {
      fail("type");
    }
    if (accept_sym("^")) return LamaType::pow(std::move(base), natural());
    return base;
  }

  // -- constants ----------------------------------------------------------

  bool at_negative_integer() const {
    return is_sym("(") && is_sym("-", 1) && is_kind(Token::Kind::Integer, 2) && is_sym(")", 3);
  }

  bool at_constant() const {
    return is_kw("true") || is_kw("false") || is_kind(Token::Kind::Integer) || is_kw("sint") ||
           is_kw("uint") || at_negative_integer();
  }

  Integer integer_const() {
    if (at_negative_integer()) {
      next();
      next();
      Integer v = natural();
      next();
      return -v;
    }
    if (!is_kind(Token::Kind::Integer)) fail("integer constant");
    return natural();
  }

  Constant constant() {
    if (accept_kw("true")) return Constant::of_bool(true);
    if (accept_kw("false")) return Constant::of_bool(false);
    if (is_kw("sint") || is_kw("uint")) {
      bool is_signed = next().text == "sint";
      expect_sym("[");
      Integer n = natural();
      expect_sym("]");
      expect_sym("(");
      Integer v = is_signed ? integer_const() : natural();
      expect_sym(")");
      return is_signed ? Constant::of_sint(n, v) : Constant::of_uint(n, v);
    }
    if (!is_kind(Token::Kind::Integer) && !at_negative_integer()) fail("constant");
    Integer v = integer_const();
    if (accept_sym("/")) {
      SourceLoc loc = peek().loc;
      Integer d = integer_const();
      if (d == 0) throw ParseError("real-const", "denominator of a real constant is zero", loc);
      return Constant::of_real(v, d);
    }
    return Constant::of_int(v);
  }

  // -- expressions --------------------------------------------------------

  Expr expr() {
    SourceLoc loc = peek().loc;
    if (at_constant()) return Expr::constant_expr(constant(), loc);
    if (is_kind(Token::Kind::Identifier)) return Expr::var(ident().first, loc);
    if (!is_sym("(")) fail("expression");
    next();
    const Token& head = peek();
    Expr result;
    if (accept_kw("not")) {
      result = Expr::negation(expr(), loc);
    } else if (accept_kw("ite")) {
      Expr c = expr();
      Expr t = expr();
      Expr e = expr();
      result = Expr::ite(std::move(c), std::move(t), std::move(e), loc);
    } else if (accept_sym("#")) {
      std::vector<Expr> es;
      do {
        es.push_back(expr());
      } while (!is_sym(")") && !is_kind(Token::Kind::End));
      result = Expr::tuple(std::move(es), loc);
    } else if (accept_kw("project")) {
      std::string name = ident().first;
      result = Expr::project(std::move(name), natural(), loc);
    } else if (accept_kw("match")) {
      Expr scrutinee = expr();
      expect_sym("{");
      std::vector<Pattern> ps;
      do {
        Pattern p;
        p.loc = peek().loc;
        if (!accept_sym("_")) p.head = ident().first;
        expect_sym(".");
        p.body = expr();
        ps.push_back(std::move(p));
      } while (accept_sym(","));
      expect_sym("}");
      result = Expr::match(std::move(scrutinee), std::move(ps), loc);
    } else if ((head.kind == Token::Kind::Keyword || head.kind == Token::Kind::Symbol) &&
               binop_table().count(head.text)) {
      BinOp op = binop_table().at(next().text);
      Expr a = expr();
      Expr b = expr();
      result = Expr::binary(op, std::move(a), std::move(b), loc);
    } else {
      fail("operator");
    }
    if (!is_sym(")")) fail("')' (operator arity mismatch)");
    next();
    return result;
  }
};

}  // namespace

Program parse_program(const std::vector<Token>& tokens) { return Parser(tokens).program(); }
Program parse_program(std::string_view source) { return parse_program(lex(source)); }

Expr parse_expr(const std::vector<Token>& tokens) { return Parser(tokens).whole_expr(); }
Expr parse_expr(std::string_view source) { return parse_expr(lex(source)); }

Constant parse_constant(const std::vector<Token>& tokens) {
  return Parser(tokens).whole_constant();
}
Constant parse_constant(std::string_view source) { return parse_constant(lex(source)); }

LamaType parse_type(std::string_view source) {
  auto toks = lex(source);
  return Parser(toks).whole_type();
}

}  // namespace lama
