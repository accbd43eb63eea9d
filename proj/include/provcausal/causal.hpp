#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "provcausal/domain.hpp"
#include "provcausal/funcspec.hpp"

namespace provcausal::causal {

// one structural equation: X := fn(parents...)
struct Equation {
  std::string name;
  std::vector<std::string> parents;  // exogenous or endogenous names
  FunctionSpec fn;
};

// acyclic structural causal model over a finite domain. declaration
// order of the endogenous list is the canonical variable order used by
// every deterministic search in this library.
struct CausalModel {
  Domain domain;
  std::vector<std::string> exogenous;
  std::vector<Equation> endogenous;
  // optional default context, handy for model files meant to be queried
  std::map<std::string, std::string> context;
};

using Valuation = std::map<std::string, Value>;

// total assignment to the exogenous variables, keyed by name
using Context = std::map<std::string, Value>;

// partial assignment to endogenous variables
using Intervention = std::map<std::string, Value>;

// indexed, table compiled form. variables are numbered exogenous first
// (0..nu-1) then endogenous in declaration order (nu..nu+nv-1).
class CompiledModel {
 public:
  explicit CompiledModel(const CausalModel& m);

  const CausalModel& model() const { return model_; }
  const Domain& domain() const { return model_.domain; }
  int exoCount() const { return nu_; }
  int endoCount() const { return nv_; }

  int varIndex(const std::string& name) const;        // throws if unknown
  int endoIndex(const std::string& name) const;       // 0-based among endogenous
  const std::string& varName(int idx) const { return names_[static_cast<size_t>(idx)]; }
  const std::string& endoName(int i) const { return names_[static_cast<size_t>(nu_ + i)]; }

  // parents of endogenous variable i as combined indices
  const std::vector<int>& parentsOf(int i) const { return parents_[static_cast<size_t>(i)]; }
  const CompiledFn& fnOf(int i) const { return fns_[static_cast<size_t>(i)]; }

  // all values, exogenous first. forced may be empty or sized nv with
  // -1 for untouched variables; forcing replaces the equation outcome.
  std::vector<Value> solve(std::span<const Value> context,
                           std::span<const int> forced = {}) const;

  // endogenous ancestors of endogenous variable i (indices among endo)
  std::vector<int> endoAncestors(int i) const;

  // endogenous indices in the evaluation order solve uses
  const std::vector<int>& topoOrder() const { return topo_; }

  Context parseContext(const std::map<std::string, std::string>& named) const;

 private:
  CausalModel model_;
  int nu_ = 0, nv_ = 0;
  std::vector<std::string> names_;
  std::map<std::string, int> index_;
  std::vector<std::vector<int>> parents_;  // per endo var, combined indices
  std::vector<CompiledFn> fns_;
  std::vector<int> topo_;                  // endo indices in evaluation order
};

// replaces each named equation by the constant given; the input model is
// left untouched. intervening on an exogenous or unknown name throws.
CausalModel intervene(const CausalModel& m, const Intervention& setting);

// solve from a full exogenous context; result covers U and V
Valuation solve(const CausalModel& m, const Context& u);

struct CausalSituation {
  CausalModel model;
  Valuation values;  // proposed valuation over U and V
};

struct ConsistencyReport {
  bool consistent = true;
  std::vector<std::string> mismatched;  // endogenous names violating their equation
};

ConsistencyReport isConsistent(const CausalSituation& s);

// family of solutions under interventions, the semantic object a model
// denotes: apply(tau, u) = solve(intervene(m, tau), u)
class CausalFunction {
 public:
  explicit CausalFunction(const CausalModel& m) : compiled_(m) {}
  Valuation apply(const Intervention& tau, const Context& u) const;

 private:
  CompiledModel compiled_;
};

// flags equations that ignore a declared parent
std::vector<std::string> lint(const CausalModel& m);

// semantic comparison: same variables, same parent lists, same compiled
// tables, same default context
bool sameModel(const CausalModel& a, const CausalModel& b);

CausalModel readModel(const std::string& text);
std::string writeModel(const CausalModel& m);
CausalModel readModelFile(const std::string& path);

}  // namespace provcausal::causal
