#pragma once

#include "lama/ast.hpp"

#include <stdexcept>
#include <string>

namespace lama {

// Base of every diagnostic the library raises. `rule` names the grammar
// production, typing rule or check that failed.
class Error : public std::runtime_error {
 public:
  Error(std::string rule, std::string message, SourceLoc loc = {})
      : std::runtime_error(message), rule_(std::move(rule)), loc_(loc) {}

  const std::string& rule() const { return rule_; }
  const SourceLoc& loc() const { return loc_; }

  // `file:line:col: [rule] message`
  std::string format(const std::string& file) const {
    return file + ":" + std::to_string(loc_.line) + ":" + std::to_string(loc_.column) +
           ": [" + rule_ + "] " + what();
  }

 private:
  std::string rule_;
  SourceLoc loc_;
};

class LexError : public Error {
 public:
  LexError(std::string message, SourceLoc loc) : Error("lex", std::move(message), loc) {}
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class MalformedTypeError : public Error {
 public:
  MalformedTypeError(std::string message, SourceLoc loc = {})
      : Error("malformed-type", std::move(message), loc) {}
};

class TypeError : public Error {
 public:
  using Error::Error;
};

// Raised by the dependency analysis. `rule` is one of "cycle",
// "missing-definition", "multi-automaton-definition", "duplicate-definition",
// "node-use-once".
class CausalityError : public Error {
 public:
  CausalityError(std::string rule, std::string message, std::vector<std::string> cycle = {})
      : Error(std::move(rule), std::move(message)), cycle_(std::move(cycle)) {}

  const std::vector<std::string>& cycle() const { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

// Raised while executing a program: "uninitialized-read", "match-failure",
// "division-by-zero", "overflow", "bad-input".
class RuntimeError : public Error {
 public:
  using Error::Error;
};

class UnsupportedTypeError : public Error {
 public:
  UnsupportedTypeError(std::string message, SourceLoc loc = {})
      : Error("unsupported-type", std::move(message), loc) {}
};

class SolverError : public Error {
 public:
  explicit SolverError(std::string message) : Error("solver", std::move(message)) {}
};

}  // namespace lama
