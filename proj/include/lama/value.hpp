#pragma once

// Runtime values of the reference semantics.

#include "lama/ast.hpp"
#include "lama/typecheck.hpp"

#include <map>
#include <random>
#include <string>
#include <vector>

namespace lama {

struct Value {
  enum class Kind { Bool, Int, Real, SInt, UInt, Enum, Tuple };

  Kind kind = Kind::Bool;
  bool boolean = false;
  Integer integer;            // Int, SInt, UInt
  Rational rational;          // Real
  Integer width;              // SInt, UInt
  std::string enum_name;      // Enum
  std::string constructor;    // Enum
  std::vector<Value> elems;   // Tuple

  static Value of_bool(bool b);
  static Value of_int(Integer i);
  static Value of_real(Rational q);
  static Value of_sint(Integer width, Integer v);
  static Value of_uint(Integer width, Integer v);
  static Value of_enum(std::string enum_name, std::string ctor);
  static Value of_tuple(std::vector<Value> es);

  friend bool operator==(const Value&, const Value&) = default;
};

using Bindings = std::map<std::string, Value>;

// LAMA constant syntax: `true`, `(- 3)`, `1 / 2`, `sint[8](5)`, `Ctor`, `(# 1 2)`.
std::string to_string(const Value& v);

Value constant_value(const Constant& c);

bool has_type(const Value& v, const LamaType& t, const Environments& env);

// Parses a value literal of type `t`. Throws RuntimeError("bad-input").
Value parse_value(const std::string& text, const LamaType& t, const Environments& env);

// Uniform-ish random value of type `t`; integers and reals are drawn from a
// small range around zero.
Value random_value(const LamaType& t, const Environments& env, std::mt19937_64& rng);

}  // namespace lama
