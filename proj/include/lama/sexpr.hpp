#pragma once

// Minimal S-expressions for SMT-LIB2 terms and solver replies.

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace lama {

struct Sexpr {
  bool is_atom = true;
  std::string atom;
  std::vector<Sexpr> list;

  Sexpr() = default;
  Sexpr(std::string a) : atom(std::move(a)) {}  // NOLINT: atoms convert implicitly
  Sexpr(const char* a) : atom(a) {}             // NOLINT

  static Sexpr make_list(std::vector<Sexpr> items) {
    Sexpr s;
    s.is_atom = false;
    s.list = std::move(items);
    return s;
  }

  bool is(std::string_view a) const { return is_atom && atom == a; }
  std::string str() const;

  friend bool operator==(const Sexpr&, const Sexpr&) = default;
};

// (head args...)
Sexpr app(Sexpr head, std::vector<Sexpr> args);

// Parses exactly one S-expression; throws SolverError on malformed input.
Sexpr parse_sexpr(std::string_view text);

// Offset just past the first complete S-expression in `text`, or npos if
// it is incomplete. Leading whitespace is skipped.
std::size_t sexpr_end(std::string_view text);

// Smart constructors that fold the trivial cases.
Sexpr mk_and(std::vector<Sexpr> xs);
Sexpr mk_or(std::vector<Sexpr> xs);
Sexpr mk_not(Sexpr x);
Sexpr mk_implies(Sexpr a, Sexpr b);
Sexpr mk_eq(Sexpr a, Sexpr b);
Sexpr mk_ite(Sexpr c, Sexpr t, Sexpr e);

}  // namespace lama
