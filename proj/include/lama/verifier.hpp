#pragma once

// Bounded model checking and k-induction over an encoded system.

#include "lama/interp.hpp"
#include "lama/smt_encode.hpp"
#include "lama/solver.hpp"

#include <string>
#include <vector>

namespace lama {

struct Verdict {
  enum class Kind { Falsified, Proved, Exhausted, Unknown };

  Kind kind = Kind::Unknown;
  long k = 0;                     // depth, induction depth or bound
  std::vector<StepRecord> trace;  // Falsified only
  std::string reason;             // Unknown only
};

const char* to_string(Verdict::Kind k);

// `RESULT=<kind> K=<k>` followed by one trace line per step.
std::string serialize(const Verdict& v);

// Declares the streams and predicates of `sys` under `prefix`.
void load_system(const EncodedSystem& sys, SolverSession& s, const std::string& prefix);

// Sort declarations shared by all namespaces; send once per session.
void load_sorts(const EncodedSystem& sys, SolverSession& s);

Verdict bmc(const EncodedSystem& sys, long max_depth, SolverSession& s);

Verdict k_induction(const EncodedSystem& sys, long max_k, SolverSession& s);

// Reads the model for indices 0..k of the `prefix` namespace.
std::vector<StepRecord> extract_trace(const EncodedSystem& sys, SolverSession& s, long k,
                                      const std::string& prefix);

// Asserts I, T(0..n-1) and the inputs of `trace`, then reads every stream
// back. Returns nullopt when the solver does not answer sat.
std::optional<std::vector<StepRecord>> solve_trace(const EncodedSystem& sys, SolverSession& s,
                                                   const std::vector<Bindings>& trace);

}  // namespace lama
