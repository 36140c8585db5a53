#pragma once

// Translation of checked programs into SMT-LIB2 stream predicates.
//
// Every variable becomes one or more streams, i.e. unary functions from
// the index sort to a value sort; product-typed variables are split into
// one stream per component. The system is factored into an initial
// predicate I, a step predicate T(n), an assertion predicate A(n) and a
// property P(n). T(n) fixes the instantaneous values at n and the state
// at n + 1.

#include "lama/sexpr.hpp"
#include "lama/typecheck.hpp"
#include "lama/value.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lama {

enum class NatEncoding { Datatype, Integer };
enum class EnumEncoding { Datatype, Bitvector };

struct EncodingConfig {
  NatEncoding nat = NatEncoding::Datatype;
  EnumEncoding enums = EnumEncoding::Bitvector;

  friend bool operator==(const EncodingConfig&, const EncodingConfig&) = default;
};

std::string to_string(const EncodingConfig& c);

// A stream-valued term of some LAMA type: a leaf stream, or a tuple of
// stream terms for products.
struct StreamTerm {
  std::string stream;              // leaf: stream function symbol
  LamaType type;                   // leaf type (base or enum)
  std::vector<StreamTerm> elems;   // product components

  bool is_leaf() const { return elems.empty(); }
};

struct StreamDecl {
  std::string name;
  Sexpr sort;
  LamaType type;  // leaf LAMA type, or the location enum marker for automata
};

struct NodeInterface {
  std::vector<StreamTerm> inputs;
  std::vector<StreamTerm> outputs;
  Sexpr activation;  // E(n) of the instance
};

struct AutomatonStreams {
  std::string s, s1;                // stream symbols
  std::string sort;                 // location sort name (datatype) or enum key
  std::vector<std::string> locations;
  Sexpr activation;
};

// δ: qualified LAMA names (`x`, `N.x`) to their streams; node paths to their
// interface; automaton ids (`N.i`) to location streams.
struct DeltaMap {
  std::map<std::string, StreamTerm> vars;
  std::map<std::string, NodeInterface> nodes;
  std::map<std::string, AutomatonStreams> automata;
  std::map<std::string, Sexpr> activations;  // scope path -> E(n); "" is the program
};

// Term language of encoded predicates: the free symbol `n` is the index.
struct EncodedSystem {
  EncodingConfig config;
  std::vector<std::string> sort_decls;    // declare-datatypes commands
  std::vector<StreamDecl> streams;        // declaration order
  std::set<std::string> stream_names;
  DeltaMap delta;
  Sexpr init;        // closed; refers to index 0
  Sexpr step;        // T(n)
  Sexpr assertion;   // A(n)
  Sexpr property;    // P(n)
  std::vector<std::string> warnings;

  // Location and enum sorts used for value decoding.
  std::map<std::string, std::vector<std::string>> enum_ctors;  // LAMA enum -> ctors

  const Environments* env = nullptr;
  const CheckedProgram* program = nullptr;

  // SMT-LIB2 commands that declare the streams and define I, T, A, P under
  // `prefix` (sorts are declared separately and shared).
  std::vector<std::string> declarations(const std::string& prefix) const;
  Sexpr rename(const Sexpr& term, const std::string& prefix) const;

  // Index term for i, e.g. `(succ (succ zero))` or `2`.
  Sexpr index(long i) const;
  // Index term n + k for a symbolic base.
  Sexpr offset(const Sexpr& base, long k) const;
  Sexpr index_sort() const;

  // Applications of the defined predicates.
  Sexpr init_at(const std::string& prefix) const;
  Sexpr step_at(const std::string& prefix, const Sexpr& idx) const;
  Sexpr assertion_at(const std::string& prefix, const Sexpr& idx) const;
  Sexpr property_at(const std::string& prefix, const Sexpr& idx) const;

  // Value literal in this encoding.
  Sexpr literal(const Value& v) const;
  // Decodes a solver value of leaf type `t`; throws SolverError.
  Value decode(const Sexpr& s, const LamaType& t) const;
  // Equalities fixing a stream term to a value at `idx`.
  Sexpr bind(const StreamTerm& term, const Value& v, const Sexpr& idx, const std::string& prefix) const;
};

// Encodes a checked, causal program. `invariant` overrides the program's
// invariant when given. Throws UnsupportedTypeError for sint/uint.
EncodedSystem encode_program(const CheckedProgram& p, EncodingConfig cfg,
                             const Expr* invariant = nullptr);

// Standalone script: set-logic, sorts, declarations, and the BMC query
// I, T(0..depth) with the negated property at `depth`.
std::string dump_script(const EncodedSystem& sys, const std::string& logic, long depth);

}  // namespace lama
