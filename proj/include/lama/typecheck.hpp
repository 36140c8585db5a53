#pragma once

// Static typing of LAMA programs.
//
// Typing uses three environments: Σ (enum constructors and enum names),
// Δ (global constants) and Γ (variables and nodes of the current block).
// Operators are given rank-1 polymorphic schemes over two universes,
// Num ⊂ Type; schemes are instantiated bottom-up from argument types.

#include "lama/ast.hpp"
#include "lama/error.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lama {

enum class Universe { Num, Type };

const char* to_string(Universe u);

// Checker-internal types: surface types extended by `ok`, type variables,
// arrows and outermost universal quantifiers.
struct IntermediateType {
  enum class Kind { Surface, Ok, TypeVar, Arrow, Forall };

  Kind kind = Kind::Ok;
  LamaType surface;                                  // Surface
  std::string var;                                   // TypeVar, Forall
  Universe universe = Universe::Type;                // Forall
  std::vector<std::shared_ptr<const IntermediateType>> parts;  // Arrow: {dom, cod}; Forall: {body}

  static IntermediateType of(LamaType t);
  static IntermediateType ok();
  static IntermediateType type_var(std::string name);
  static IntermediateType arrow(IntermediateType dom, IntermediateType cod);
  static IntermediateType forall(std::string var, Universe u, IntermediateType body);

  const IntermediateType& dom() const { return *parts.at(0); }
  const IntermediateType& cod() const { return *parts.at(1); }
  const IntermediateType& body() const { return *parts.at(0); }

  // Quantifiers may appear only in the outermost prefix.
  bool well_formed() const;
  bool is_quantifier_free() const;
};

std::string to_string(const IntermediateType& t);

// Records one universe-membership judgement made while instantiating a
// polymorphic scheme: `⊢ type : universe` derived by `rule`.
struct UniverseJudgement {
  LamaType type;
  Universe universe;
  std::string rule;  // num-univ, bool-univ, enum-univ, prod-univ, univ-gen
};

struct Environments {
  std::map<std::string, std::string> sigma;                  // constructor -> enum name
  std::map<std::string, std::vector<std::string>> enums;     // enum name -> constructors
  std::vector<std::string> enum_order;                       // declaration order
  std::map<std::string, LamaType> delta;                     // constant -> type
  std::map<std::string, Constant> constant_values;

  bool is_constructor(const std::string& n) const { return sigma.count(n) != 0; }
};

// Γ for expression typing: variable name -> surface type.
using Gamma = std::map<std::string, LamaType>;

struct NodeSignature {
  std::vector<LamaType> params;
  std::vector<LamaType> returns;

  // (# A1 ... An) => (# B1 ... Bm)
  IntermediateType arrow() const;
  // Type of `(use N ...)`: the single return type, or the product of all.
  LamaType result_type() const;
};

enum class VarKind { Input, Output, Local, State };

const char* to_string(VarKind k);

struct VarInfo {
  std::string name;
  LamaType type;  // desugared
  VarKind kind;
  SourceLoc loc;
};

// A checked block: the program itself or a node. Nodes nest.
struct Scope {
  std::string name;                 // node name, empty for the program
  std::string path;                 // dotted node path, empty for the program
  const Node* node = nullptr;       // nullptr for the program
  const Flow* flow = nullptr;
  const std::vector<Automaton>* automata = nullptr;
  const std::vector<StateInit>* initial = nullptr;
  const Expr* assertion = nullptr;
  std::vector<VarInfo> vars;        // declaration order: inputs, outputs, locals, states
  std::vector<Scope> children;      // declared nodes, declaration order
  std::map<std::string, NodeSignature> node_signatures;

  const VarInfo* find_var(const std::string& n) const;
  const Scope* find_child(const std::string& n) const;
  std::size_t var_index(const std::string& n) const;  // declaration position, or npos
  Gamma gamma() const;
  std::string qualify(const std::string& var) const { return path.empty() ? var : path + "." + var; }
};

struct Diagnostic {
  std::string rule;
  std::string message;
  SourceLoc loc;
};

// Result of a successful check. Owns a desugared copy of the program;
// every scope points into it.
struct CheckedProgram {
  std::shared_ptr<const Program> program;
  Environments env;
  Scope top;
  std::vector<Diagnostic> warnings;
  std::vector<UniverseJudgement> judgements;
  const Expr* invariant = nullptr;

  CheckedProgram() = default;
  CheckedProgram(const CheckedProgram&) = delete;
  CheckedProgram& operator=(const CheckedProgram&) = delete;
  CheckedProgram(CheckedProgram&&) = default;
  CheckedProgram& operator=(CheckedProgram&&) = default;
};

// Universe membership: (num-univ), (bool-univ), (enum-univ), (prod-univ),
// (univ-gen). Returns the deriving rule, or nullopt if `t` is not a member.
std::optional<std::string> universe_rule(const LamaType& t, Universe u, const Environments& env);

// Polymorphic scheme of an operator, e.g. `+ : ∀t:Num. t ⇒ t ⇒ t`.
IntermediateType operator_scheme(BinOp op);
IntermediateType not_scheme();
IntermediateType ite_scheme();

// Builds Σ from the typedef section. Throws TypeError on duplicates.
Environments build_sigma(const std::vector<EnumDef>& typedefs);

// Adds the constants section to Δ.
void build_delta(Environments& env, const std::vector<ConstantDef>& constants);

LamaType constant_type(const Constant& c);

// Applies `scheme` to `args` via (∀-E) then iterated (app).
LamaType instantiate(const IntermediateType& scheme, const std::vector<LamaType>& args,
                     const Environments& env, SourceLoc loc, const std::string& rule,
                     std::vector<UniverseJudgement>* log = nullptr);

LamaType infer_expr(const Expr& e, const Environments& env, const Gamma& gamma,
                    std::vector<UniverseJudgement>* log = nullptr,
                    std::vector<Diagnostic>* warnings = nullptr);

// Checks a node in Σ, Δ and returns its signature; `out` receives the scope.
NodeSignature check_node(const Node& n, const Environments& env, Scope* out = nullptr,
                         std::vector<UniverseJudgement>* log = nullptr,
                         std::vector<Diagnostic>* warnings = nullptr);

CheckedProgram check_program(const Program& p);

// True when `e` only consists of constants, constructors, Δ-names and tuples.
bool is_constant_expr(const Expr& e, const Environments& env);

}  // namespace lama
