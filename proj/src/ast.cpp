#include "lama/ast.hpp"

#include "lama/error.hpp"

namespace lama {

std::string to_string(const LamaType& t) {
  switch (t.kind) {
    case LamaType::Kind::Bool: return "bool";
    case LamaType::Kind::Int: return "int";
    case LamaType::Kind::Real: return "real";
    case LamaType::Kind::SInt: return "sint[" + t.width.str() + "]";
    case LamaType::Kind::UInt: return "uint[" + t.width.str() + "]";
    case LamaType::Kind::Named: return t.name;
    case LamaType::Kind::Pow: return to_string(t.elems.at(0)) + "^" + t.width.str();
    case LamaType::Kind::Prod: {
      std::string s = "(#";
      for (const auto& e : t.elems) s += " " + to_string(e);
      return s + ")";
    }
  }
  return "?";
}

LamaType desugar_pow_type(const LamaType& t) {
  switch (t.kind) {
    case LamaType::Kind::Pow: {
      if (t.width < 1)
        throw MalformedTypeError("exponent of " + to_string(t) + " must be at least 1");
      LamaType base = desugar_pow_type(t.elems.at(0));
      std::vector<LamaType> copies(static_cast<std::size_t>(t.width), base);
      return LamaType::prod(std::move(copies));
    }
    case LamaType::Kind::Prod: {
      std::vector<LamaType> es;
      es.reserve(t.elems.size());
      for (const auto& e : t.elems) es.push_back(desugar_pow_type(e));
      return LamaType::prod(std::move(es));
    }
    default:
      return t;
  }
}

const char* to_string(BinOp op) {
  switch (op) {
    case BinOp::Or: return "or";
    case BinOp::And: return "and";
    case BinOp::Xor: return "xor";
    case BinOp::Implies: return "=>";
    case BinOp::Eq: return "=";
    case BinOp::Lt: return "<";
    case BinOp::Gt: return ">";
    case BinOp::Le: return "<=";
    case BinOp::Ge: return ">=";
    case BinOp::Plus: return "+";
    case BinOp::Minus: return "-";
    case BinOp::Mul: return "*";
    case BinOp::RealDiv: return "/";
    case BinOp::IntDiv: return "div";
    case BinOp::Mod: return "mod";
  }
  return "?";
}

Expr Expr::constant_expr(Constant c, SourceLoc l) {
  Expr e;
  e.kind = Kind::Constant;
  e.constant = std::move(c);
  e.loc = l;
  return e;
}

Expr Expr::var(std::string n, SourceLoc l) {
  Expr e;
  e.kind = Kind::Var;
  e.name = std::move(n);
  e.loc = l;
  return e;
}

Expr Expr::negation(Expr a, SourceLoc l) {
  Expr e;
  e.kind = Kind::Not;
  e.args.push_back(std::move(a));
  e.loc = l;
  return e;
}

Expr Expr::binary(BinOp op, Expr a, Expr b, SourceLoc l) {
  Expr e;
  e.kind = Kind::Binary;
  e.op = op;
  e.args.push_back(std::move(a));
  e.args.push_back(std::move(b));
  e.loc = l;
  return e;
}

Expr Expr::ite(Expr c, Expr t, Expr f, SourceLoc l) {
  Expr e;
  e.kind = Kind::Ite;
  e.args.push_back(std::move(c));
  e.args.push_back(std::move(t));
  e.args.push_back(std::move(f));
  e.loc = l;
  return e;
}

Expr Expr::tuple(std::vector<Expr> es, SourceLoc l) {
  Expr e;
  e.kind = Kind::Tuple;
  e.args = std::move(es);
  e.loc = l;
  return e;
}

Expr Expr::project(std::string n, Integer i, SourceLoc l) {
  Expr e;
  e.kind = Kind::Project;
  e.name = std::move(n);
  e.index = std::move(i);
  e.loc = l;
  return e;
}

Expr Expr::match(Expr scrutinee, std::vector<Pattern> ps, SourceLoc l) {
  Expr e;
  e.kind = Kind::Match;
  e.args.push_back(std::move(scrutinee));
  e.patterns = std::move(ps);
  e.loc = l;
  return e;
}

const Location* Automaton::find_location(const std::string& name) const {
  for (const auto& l : locations)
    if (l.name == name) return &l;
  return nullptr;
}

}  // namespace lama
