#include "lama/value.hpp"

#include "lama/error.hpp"
#include "lama/interp.hpp"
#include "lama/parser.hpp"

namespace lama {

Value Value::of_bool(bool b) {
  Value v;
  v.kind = Kind::Bool;
  v.boolean = b;
  return v;
}

Value Value::of_int(Integer i) {
  Value v;
  v.kind = Kind::Int;
  v.integer = std::move(i);
  return v;
}

Value Value::of_real(Rational q) {
  Value v;
  v.kind = Kind::Real;
  v.rational = std::move(q);
  return v;
}

Value Value::of_sint(Integer width, Integer i) {
  Value v;
  v.kind = Kind::SInt;
  v.width = std::move(width);
  v.integer = std::move(i);
  return v;
}

Value Value::of_uint(Integer width, Integer i) {
  Value v;
  v.kind = Kind::UInt;
  v.width = std::move(width);
  v.integer = std::move(i);
  return v;
}

Value Value::of_enum(std::string enum_name, std::string ctor) {
  Value v;
  v.kind = Kind::Enum;
  v.enum_name = std::move(enum_name);
  v.constructor = std::move(ctor);
  return v;
}

Value Value::of_tuple(std::vector<Value> es) {
  Value v;
  v.kind = Kind::Tuple;
  v.elems = std::move(es);
  return v;
}

namespace {

std::string int_literal(const Integer& i) {
  if (i < 0) return "(- " + Integer(-i).str() + ")";
  return i.str();
}

}  // namespace

std::string to_string(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Bool: return v.boolean ? "true" : "false";
    case Value::Kind::Int: return int_literal(v.integer);
    case Value::Kind::Real:
      return int_literal(numerator(v.rational)) + " / " + denominator(v.rational).str();
    case Value::Kind::SInt: return "sint[" + v.width.str() + "](" + int_literal(v.integer) + ")";
    case Value::Kind::UInt: return "uint[" + v.width.str() + "](" + v.integer.str() + ")";
    case Value::Kind::Enum: return v.constructor;
    case Value::Kind::Tuple: {
      std::string s = "(#";
      for (const auto& e : v.elems) s += " " + to_string(e);
      return s + ")";
    }
  }
  return "?";
}

Value constant_value(const Constant& c) {
  switch (c.kind) {
    case Constant::Kind::Bool: return Value::of_bool(c.boolean);
    case Constant::Kind::Int: return Value::of_int(c.value);
    case Constant::Kind::Real: return Value::of_real(Rational(c.value, c.denominator));
    case Constant::Kind::SInt: return Value::of_sint(c.width, c.value);
    case Constant::Kind::UInt: return Value::of_uint(c.width, c.value);
  }
  return Value{};
}

bool has_type(const Value& v, const LamaType& t, const Environments& env) {
  using K = LamaType::Kind;
  switch (t.kind) {
    case K::Bool: return v.kind == Value::Kind::Bool;
    case K::Int: return v.kind == Value::Kind::Int;
    case K::Real: return v.kind == Value::Kind::Real;
    case K::SInt: {
      if (v.kind != Value::Kind::SInt || v.width != t.width) return false;
      Integer half = Integer(1) << static_cast<unsigned>(t.width - 1);
      return v.integer >= -half && v.integer < half;
    }
    case K::UInt: {
      if (v.kind != Value::Kind::UInt || v.width != t.width) return false;
      return v.integer >= 0 && v.integer < (Integer(1) << static_cast<unsigned>(t.width));
    }
    case K::Named: {
      if (v.kind != Value::Kind::Enum || v.enum_name != t.name) return false;
      auto it = env.enums.find(t.name);
      return it != env.enums.end() &&
             std::find(it->second.begin(), it->second.end(), v.constructor) != it->second.end();
    }
    case K::Prod:
      if (v.kind != Value::Kind::Tuple || v.elems.size() != t.elems.size()) return false;
      for (std::size_t i = 0; i < v.elems.size(); ++i)
        if (!has_type(v.elems[i], t.elems[i], env)) return false;
      return true;
    case K::Pow: return has_type(v, desugar_pow_type(t), env);
  }
  return false;
}

Value parse_value(const std::string& text, const LamaType& t, const Environments& env) {
  Value v;
  try {
    Expr e = parse_expr(text);
    if (!is_constant_expr(e, env)) throw RuntimeError("bad-input", "not a constant: " + text);
    v = eval_expr(e, {}, env);
  } catch (const RuntimeError&) {
    throw;
  } catch (const Error& e) {
    throw RuntimeError("bad-input", "cannot read value '" + text + "': " + e.what());
  }
  if (!has_type(v, t, env))
    throw RuntimeError("bad-input", "value " + text + " does not have type " + to_string(t));
  return v;
}

Value random_value(const LamaType& t, const Environments& env, std::mt19937_64& rng) {
  using K = LamaType::Kind;
  auto uniform = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  switch (t.kind) {
    case K::Bool: return Value::of_bool(uniform(0, 1) == 1);
    case K::Int: return Value::of_int(uniform(-20, 20));
    case K::Real: return Value::of_real(Rational(uniform(-40, 40), uniform(1, 4)));
    case K::SInt: {
      long half = t.width >= 8 ? 128 : (1L << static_cast<long>(t.width - 1));
      return Value::of_sint(t.width, uniform(-half, half - 1));
    }
    case K::UInt: {
      long top = t.width >= 8 ? 255 : (1L << static_cast<long>(t.width)) - 1;
      return Value::of_uint(t.width, uniform(0, top));
    }
    case K::Named: {
      const auto& ctors = env.enums.at(t.name);
      return Value::of_enum(t.name, ctors[static_cast<std::size_t>(uniform(0, static_cast<long>(ctors.size()) - 1))]);
    }
    case K::Prod: {
      std::vector<Value> es;
      for (const auto& e : t.elems) es.push_back(random_value(e, env, rng));
      return Value::of_tuple(std::move(es));
    }
    case K::Pow: return random_value(desugar_pow_type(t), env, rng);
  }
  return Value{};
}

}  // namespace lama
