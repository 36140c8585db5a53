#pragma once

// Lexing, parsing and pretty-printing of LAMA source text.
//
// Expressions are S-expressions in prefix form; there is no infix syntax
// and no precedence. The concrete grammar (ε marks an empty alternative):
//
//   Program      ::= TypeDefs ConstantDefs Inputs Declarations Flow Initial Assertion Invariant
//   TypeDefs     ::= ε | "typedef" (EnumDef ";")+
//   EnumDef      ::= "enum" Id "=" "{" Id ("," Id)* "}"
//   ConstantDefs ::= ε | "constants" (Id "=" Constant ";")+
//   Inputs       ::= ε | "input" VarDecls
//   Declarations ::= NodeDecls LocalDecls StateDecls
//   NodeDecls    ::= ε | "nodes" Node+
//   LocalDecls   ::= ε | "local" VarDecls
//   StateDecls   ::= ε | "state" VarDecls
//   VarDecls     ::= (TypedVars ";")+
//   TypedVars    ::= Id ("," Id)* ":" Type
//   ListTypedVar ::= TypedVars ("," TypedVars)*
//   Node         ::= "node" Id "(" [ListTypedVar] ")" "returns" "(" ListTypedVar ")" ";"
//                    "let" Declarations Flow Automaton* Initial Assertion "tel"
//   Flow         ::= ["definition" (InstantDef ";")+] ["transition" (StateId "=" Expr ";")+]
//   InstantDef   ::= Id "=" Expr | Id "=" "(" "use" Id Expr* ")"
//   Automaton    ::= "automaton" "let" Location+ "initial" Id ";" Edge* Defaults "tel"
//   Location     ::= "location" Id "let" Flow "tel"
//   Edge         ::= "edge" "(" Id "," Id ")" ":" Expr ";"
//   Defaults     ::= ε | "default" (Id "=" Expr ";")+
//   Initial      ::= ε | "initial" StateInit ("," StateInit)* ";"
//   StateInit    ::= Id "=" Expr
//   Assertion    ::= ε | "assertion" Expr ";"
//   Invariant    ::= ε | "invariant" Expr ";"
//   Type         ::= BaseType | BaseType "^" Natural | Id | "(" "#" Type+ ")"
//   BaseType     ::= "bool" | "int" | "real" | "sint" "[" Natural "]" | "uint" "[" Natural "]"
//   Expr         ::= Constant | Id | "(" "not" Expr ")" | "(" BinOp Expr Expr ")"
//                  | "(" "ite" Expr Expr Expr ")" | "(" "#" Expr+ ")"
//                  | "(" "project" Id Natural ")" | "(" "match" Expr "{" Pattern ("," Pattern)* "}" ")"
//   Pattern      ::= (Id | "_") "." Expr
//   Constant     ::= "true" | "false" | IntConst | IntConst "/" IntConst
//                  | "sint" "[" Natural "]" "(" IntConst ")" | "uint" "[" Natural "]" "(" Natural ")"
//   IntConst     ::= Integer | "(" "-" Integer ")"
//
// Comments run from `--` to the end of the line.

#include "lama/ast.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace lama {

struct Token {
  enum class Kind { Keyword, Symbol, Identifier, StateId, Integer, End };

  Kind kind = Kind::End;
  std::string text;  // StateId lexemes keep their trailing apostrophe
  SourceLoc loc;

  friend bool operator==(const Token& a, const Token& b) {
    return a.kind == b.kind && a.text == b.text;
  }
};

const std::vector<std::string>& reserved_words();
const std::vector<std::string>& reserved_symbols();

// Tokenizes `source`. The returned list does not contain the End token.
std::vector<Token> lex(std::string_view source);

Program parse_program(const std::vector<Token>& tokens);
Program parse_program(std::string_view source);

// Parse a single expression / constant; all tokens must be consumed.
Expr parse_expr(const std::vector<Token>& tokens);
Expr parse_expr(std::string_view source);
Constant parse_constant(const std::vector<Token>& tokens);
Constant parse_constant(std::string_view source);

LamaType parse_type(std::string_view source);

std::string pretty(const Program& p);
std::string pretty(const Expr& e);
std::string pretty(const Constant& c);

}  // namespace lama
