#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "provcausal/causal.hpp"

namespace provcausal::hpcause {

// a consistent model plus valuation, the setting cause queries run in.
// the exogenous context is fixed from the valuation throughout a query.
class Situation {
 public:
  // solve the model under the context; always consistent
  static Situation fromContext(const causal::CausalModel& m, const causal::Context& u);
  // adopt a given valuation over U and V; throws when it breaks an equation
  static Situation fromValuation(const causal::CausalModel& m, const causal::Valuation& vals);

  const causal::CompiledModel& compiled() const { return cm_; }
  const std::vector<Value>& sigmaEndo() const { return sigmaEndo_; }
  const std::vector<Value>& context() const { return ctx_; }
  Value sigmaOf(const std::string& var) const;

 private:
  explicit Situation(const causal::CausalModel& m) : cm_(m) {}

  causal::CompiledModel cm_;
  std::vector<Value> sigmaEndo_;  // per endogenous index
  std::vector<Value> ctx_;        // per exogenous index
};

struct Options {
  // drops contingency and candidate sets reaching outside the effect's
  // ancestor cone. provably answer preserving, validated against the
  // literal search in the tests; keep it off to run the definition as is.
  bool pruneToAncestors = true;
};

using VarVal = std::pair<std::string, Value>;

struct Witness {
  std::vector<std::string> w;      // contingency variables, model order
  std::vector<VarVal> xPrime;      // alternative candidate values
  std::vector<VarVal> wPrime;      // contingency values
};

struct Verdict {
  bool weak = false;
  bool actual = false;
  std::optional<Witness> witness;        // present when weak
  std::vector<VarVal> failingSubset;     // nonempty when weak but not actual
};

struct CauseSet {
  std::vector<VarVal> members;  // model order
  Witness witness;
};

// weak cause of target under the standard two part counterfactual test:
// some contingency setting flips the effect when the candidate changes,
// and restoring the candidate keeps the effect for every partial reset of
// the remaining variables to their observed values. the search walks
// contingency sets by size then lexicographically and values in domain
// order, so the reported witness is the least one.
Verdict isWeakCause(const Situation& s, const std::vector<VarVal>& candidate,
                    const VarVal& target, const Options& opts = {});

// weak and no proper nonempty subset weak
Verdict isActualCause(const Situation& s, const std::vector<VarVal>& candidate,
                      const VarVal& target, const Options& opts = {});

// every minimal cause set of size 1..maxSize, ordered by size then
// lexicographically by variable index
std::vector<CauseSet> enumerateActualCauses(const Situation& s, const VarVal& target,
                                            int maxSize, const Options& opts = {});

bool isPartOfActualCause(const Situation& s, const VarVal& member, const VarVal& target,
                         int maxSize, const Options& opts = {});

// memoizes weak verdicts and cause enumerations across queries against
// one situation; what the audit uses
class Engine {
 public:
  Engine(const Situation& s, Options opts = {});
  ~Engine();

  Verdict weakVerdict(const std::vector<int>& candidate, int target);
  Verdict actualVerdict(const std::vector<int>& candidate, int target);
  const std::vector<CauseSet>& causesOf(int target, int maxSize);
  bool partOf(int member, int target, int maxSize);
  // first enumerated cause set containing the member, or null
  const CauseSet* supportingCause(int member, int target, int maxSize);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace provcausal::hpcause
