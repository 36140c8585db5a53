#pragma once

// Dependency analysis of flows and automata.
//
// Graph nodes are (variable, mode, usage) triples. Edges point from a
// defined node to the nodes it reads, so dependencies are successors.
// An in-mode definition of x gets a global reference node (x, Global, u)
// with an edge to (x, m, u); readers only ever point at the reference node.

#include "lama/typecheck.hpp"

#include <compare>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace lama {

enum class Usage { I, O, L, SIn, SOut };

const char* to_string(Usage u);

struct Mode {
  int automaton = -1;    // index into the scope's automata, -1 for Global
  std::string location;  // empty for Global

  static Mode global() { return {}; }
  static Mode in(int automaton, std::string location) { return {automaton, std::move(location)}; }
  bool is_global() const { return automaton < 0; }

  friend auto operator<=>(const Mode&, const Mode&) = default;
};

struct DepNode {
  std::string var;
  Mode mode;
  Usage usage = Usage::L;

  friend auto operator<=>(const DepNode&, const DepNode&) = default;
};

std::string to_string(const DepNode& n);

struct DepGraph {
  std::set<DepNode> nodes;
  std::set<std::pair<DepNode, DepNode>> edges;

  void add_node(const DepNode& n) { nodes.insert(n); }
  void add_edge(const DepNode& from, const DepNode& to) {
    nodes.insert(from);
    nodes.insert(to);
    edges.insert({from, to});
  }
  std::vector<DepNode> successors(const DepNode& n) const;
};

// Read set of an expression. Inputs map to I, locals to L, outputs to O,
// states to SIn; constants and constructors are skipped.
std::set<std::pair<std::string, Usage>> deps(const Expr& e, const Scope& scope);

// Read set of a definition's right-hand side (union over node-use arguments).
std::set<std::pair<std::string, Usage>> deps(const InstantDefinition& d, const Scope& scope);

// Builds the graph of one scope's flow and automata.
DepGraph build_dep_graph(const Scope& scope);

// Verifies acyclicity and the causality conditions; returns an evaluation
// order with dependencies first.
std::vector<DepNode> check_causal(const DepGraph& g, const Scope& scope);

// Every node declared in `scope` is used at most once.
void check_use_once(const Scope& scope);

// One `from -> to` line per edge, wrapped in a digraph block.
std::string to_dot(const DepGraph& g);

struct ScopeAnalysis {
  DepGraph graph;
  std::vector<DepNode> order;
  std::map<std::string, int> managed;  // automaton-defined variable -> automaton index
};

// Analyses the program scope and every nested node; keys are scope paths
// ("" for the program).
std::map<std::string, ScopeAnalysis> analyze(const CheckedProgram& p);

ScopeAnalysis analyze_scope(const Scope& scope);

}  // namespace lama
