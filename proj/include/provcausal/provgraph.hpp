#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "provcausal/domain.hpp"
#include "provcausal/funcspec.hpp"

namespace provcausal::provgraph {

// labeled provenance graph. artifacts carry data values, processes carry
// an operation name resolved through an Interpretation. edges are stored
// by id reference so structurally broken graphs stay representable and
// validate() can report on them instead of the parser refusing.
struct Artifact {
  std::string id;
  std::string value;    // label, a domain value
  bool input = false;
};

struct Process {
  std::string id;
  std::string name;     // operation name, key into the interpretation
};

struct UsedEdge {
  std::string process;
  std::string artifact;
  int port = 0;         // 1-based argument position
};

struct GenEdge {
  std::string artifact;
  std::string process;
};

struct ProvGraph {
  Domain domain;
  std::vector<Artifact> artifacts;
  std::vector<Process> processes;
  std::vector<UsedEdge> used;
  std::vector<GenEdge> generated;
  std::string result;               // id of the designated result artifact
  std::vector<std::string> inputs;  // ordered ids of the input artifacts
};

struct OpSpec {
  std::string name;
  int arity = 0;
  FunctionSpec fn;
};

struct Interpretation {
  std::vector<OpSpec> ops;
  const OpSpec* find(const std::string& name) const;
};

struct Violation {
  std::string code;     // stable machine readable kind
  std::string message;  // human readable, names the offending ids
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// checks every structural invariant: bipartite edges, acyclicity,
// unique generators, functionality, port sortedness against declared
// arities, label well-formedness, interpretation totality.
ValidationReport validate(const ProvGraph& g, const Interpretation& interp);

// structure only: node, edge, port, result and acyclicity checks without
// consulting an interpretation
ValidationReport validate(const ProvGraph& g);

struct Evaluation {
  std::map<std::string, Value> values;  // every node, processes included
  Value result = 0;
};

// compiled evaluator over a valid graph. construction runs validate and
// throws on any violation.
class Evaluator {
 public:
  // tie break picks which ready node runs first; results must not differ
  enum class TieBreak { MinIndex, MaxIndex };

  Evaluator(const ProvGraph& g, const Interpretation& interp,
            TieBreak tb = TieBreak::MinIndex);

  int inputCount() const { return static_cast<int>(inputIdx_.size()); }
  const Domain& domain() const { return domain_; }

  Evaluation evaluate(std::span<const Value> inputs) const;
  // fast path: result value only
  Value resultAt(std::span<const Value> inputs) const;

 private:
  Domain domain_;
  std::vector<std::string> nodeIds_;       // artifacts then processes
  std::vector<int> inputIdx_;
  int resultIdx_ = 0;
  struct Step {
    int node;                 // node computed by this step
    std::vector<int> args;    // node indices feeding it
    const CompiledFn* fn;     // null for artifact copies
    int copyFrom = -1;
  };
  std::vector<Step> steps_;   // topological order
  std::vector<CompiledFn> fns_;
  mutable std::vector<Value> scratch_;
};

// the function a graph computes once inputs are fixed: D^n -> D at the
// result node. exhaustively enumerable since domains are finite.
class FunctionalSemantics {
 public:
  FunctionalSemantics(const ProvGraph& g, const Interpretation& interp);
  int arity() const { return eval_.inputCount(); }
  const Domain& domain() const { return eval_.domain(); }
  Value operator()(std::span<const Value> inputs) const { return eval_.resultAt(inputs); }
  // all 2^n .. |D|^n outputs in input tuple order
  std::vector<Value> tabulate() const;

 private:
  Evaluator eval_;
};

// convenience wrapper building the input tuple from labels on the
// declared input artifacts
Evaluation evaluateAtLabels(const ProvGraph& g, const Interpretation& interp);

ProvGraph readGraph(const std::string& text);
std::string writeGraph(const ProvGraph& g);
Interpretation readInterpretation(const std::string& text);
std::string writeInterpretation(const Interpretation& interp);

ProvGraph readGraphFile(const std::string& path);
Interpretation readInterpretationFile(const std::string& path);

}  // namespace provcausal::provgraph
