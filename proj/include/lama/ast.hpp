#pragma once

// Abstract syntax of LAMA programs.

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lama {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Position in the source text. Carried as metadata only: two locations
// always compare equal so that AST equality stays structural.
struct SourceLoc {
  int line = 0;
  int column = 0;

  friend bool operator==(const SourceLoc&, const SourceLoc&) { return true; }
};

struct LamaType {
  enum class Kind { Bool, Int, Real, SInt, UInt, Named, Prod, Pow };

  Kind kind = Kind::Bool;
  Integer width;                  // SInt/UInt bit width, Pow exponent
  std::string name;               // Named
  std::vector<LamaType> elems;    // Prod components, Pow base (single)

  static LamaType boolean() { return {Kind::Bool, 0, {}, {}}; }
  static LamaType integer() { return {Kind::Int, 0, {}, {}}; }
  static LamaType real() { return {Kind::Real, 0, {}, {}}; }
  static LamaType sint(Integer n) { return {Kind::SInt, std::move(n), {}, {}}; }
  static LamaType uint(Integer n) { return {Kind::UInt, std::move(n), {}, {}}; }
  static LamaType named(std::string n) { return {Kind::Named, 0, std::move(n), {}}; }
  static LamaType prod(std::vector<LamaType> es) { return {Kind::Prod, 0, {}, std::move(es)}; }
  static LamaType pow(LamaType base, Integer n) {
    return {Kind::Pow, std::move(n), {}, {std::move(base)}};
  }

  bool is_base() const {
    return kind == Kind::Bool || kind == Kind::Int || kind == Kind::Real ||
           kind == Kind::SInt || kind == Kind::UInt;
  }

  friend bool operator==(const LamaType&, const LamaType&) = default;
};

std::string to_string(const LamaType& t);

// Replaces every `T^n` by the n-fold product. Throws MalformedTypeError for n < 1.
LamaType desugar_pow_type(const LamaType& t);

struct Constant {
  enum class Kind { Bool, Int, Real, SInt, UInt };

  Kind kind = Kind::Bool;
  bool boolean = false;
  Integer value;        // Int, SInt, UInt, Real numerator
  Integer denominator;  // Real
  Integer width;        // SInt, UInt

  static Constant of_bool(bool b) { return {Kind::Bool, b, 0, 0, 0}; }
  static Constant of_int(Integer v) { return {Kind::Int, false, std::move(v), 0, 0}; }
  static Constant of_real(Integer num, Integer den) {
    return {Kind::Real, false, std::move(num), std::move(den), 0};
  }
  static Constant of_sint(Integer n, Integer v) {
    return {Kind::SInt, false, std::move(v), 0, std::move(n)};
  }
  static Constant of_uint(Integer n, Integer v) {
    return {Kind::UInt, false, std::move(v), 0, std::move(n)};
  }

  friend bool operator==(const Constant&, const Constant&) = default;
};

enum class BinOp { Or, And, Xor, Implies, Eq, Lt, Gt, Le, Ge, Plus, Minus, Mul, RealDiv, IntDiv, Mod };

const char* to_string(BinOp op);

struct Pattern;

struct Expr {
  enum class Kind { Constant, Var, Not, Binary, Ite, Tuple, Project, Match };

  Kind kind = Kind::Constant;
  SourceLoc loc;
  Constant constant;          // Constant
  std::string name;           // Var, Project
  BinOp op = BinOp::Or;       // Binary
  std::vector<Expr> args;     // Not: 1, Binary: 2, Ite: 3, Tuple: n >= 1, Match: scrutinee
  Integer index;              // Project
  std::vector<Pattern> patterns;  // Match

  static Expr constant_expr(Constant c, SourceLoc l = {});
  static Expr var(std::string n, SourceLoc l = {});
  static Expr negation(Expr e, SourceLoc l = {});
  static Expr binary(BinOp op, Expr a, Expr b, SourceLoc l = {});
  static Expr ite(Expr c, Expr t, Expr e, SourceLoc l = {});
  static Expr tuple(std::vector<Expr> es, SourceLoc l = {});
  static Expr project(std::string n, Integer i, SourceLoc l = {});
  static Expr match(Expr scrutinee, std::vector<Pattern> ps, SourceLoc l = {});

  friend bool operator==(const Expr&, const Expr&) = default;
};

struct Pattern {
  std::optional<std::string> head;  // nullopt is the wildcard `_`
  Expr body;
  SourceLoc loc;

  friend bool operator==(const Pattern&, const Pattern&) = default;
};

struct TypedVar {
  std::string name;
  LamaType type;
  SourceLoc loc;

  friend bool operator==(const TypedVar&, const TypedVar&) = default;
};

struct NodeUse {
  std::string node;
  std::vector<Expr> args;

  friend bool operator==(const NodeUse&, const NodeUse&) = default;
};

struct InstantDefinition {
  std::string target;
  std::variant<Expr, NodeUse> rhs;
  SourceLoc loc;

  bool is_node_use() const { return std::holds_alternative<NodeUse>(rhs); }
  const Expr& expr() const { return std::get<Expr>(rhs); }
  const NodeUse& use() const { return std::get<NodeUse>(rhs); }

  friend bool operator==(const InstantDefinition&, const InstantDefinition&) = default;
};

// `x' = M;` -- target holds the bare identifier without the apostrophe.
struct Transition {
  std::string target;
  Expr rhs;
  SourceLoc loc;

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct Flow {
  std::vector<InstantDefinition> definitions;
  std::vector<Transition> transitions;

  bool empty() const { return definitions.empty() && transitions.empty(); }

  friend bool operator==(const Flow&, const Flow&) = default;
};

struct Location {
  std::string name;
  Flow flow;
  SourceLoc loc;

  friend bool operator==(const Location&, const Location&) = default;
};

struct Edge {
  std::string from;
  std::string to;
  Expr cond;
  std::size_t priority = 0;  // textual position; lower fires first
  SourceLoc loc;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Default {
  std::string target;
  Expr rhs;
  SourceLoc loc;

  friend bool operator==(const Default&, const Default&) = default;
};

struct Automaton {
  std::vector<Location> locations;
  std::string initial;
  SourceLoc initial_loc;
  std::vector<Edge> edges;
  std::vector<Default> defaults;
  SourceLoc loc;

  const Location* find_location(const std::string& name) const;

  friend bool operator==(const Automaton&, const Automaton&) = default;
};

// `x = c` in an `initial` section. The value is an expression that the
// checker restricts to constants, constructors and products of those.
struct StateInit {
  std::string target;
  Expr value;
  SourceLoc loc;

  friend bool operator==(const StateInit&, const StateInit&) = default;
};

struct Node;

struct Declarations {
  std::vector<Node> nodes;
  std::vector<TypedVar> locals;
  std::vector<TypedVar> states;

  friend bool operator==(const Declarations&, const Declarations&) = default;
};

struct Node {
  std::string name;
  std::vector<TypedVar> params;
  std::vector<TypedVar> returns;
  Declarations decls;
  Flow flow;
  std::vector<Automaton> automata;
  std::vector<StateInit> initial;
  std::optional<Expr> assertion;
  SourceLoc loc;

  friend bool operator==(const Node&, const Node&) = default;
};

struct EnumDef {
  std::string name;
  std::vector<std::string> constructors;
  SourceLoc loc;

  friend bool operator==(const EnumDef&, const EnumDef&) = default;
};

struct ConstantDef {
  std::string name;
  Constant value;
  SourceLoc loc;

  friend bool operator==(const ConstantDef&, const ConstantDef&) = default;
};

struct Program {
  std::vector<EnumDef> typedefs;
  std::vector<ConstantDef> constants;
  std::vector<TypedVar> inputs;
  Declarations decls;
  Flow flow;
  std::vector<StateInit> initial;
  std::optional<Expr> assertion;
  std::optional<Expr> invariant;

  friend bool operator==(const Program&, const Program&) = default;
};

}  // namespace lama
