#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "provcausal/domain.hpp"
#include "provcausal/slp.hpp"

namespace provcausal::approx {

enum class Mode { Functional, Causal };
enum class Level { Pointwise, Local, Global };

Mode modeFromName(const std::string& name);    // functional|causal
Level levelFromName(const std::string& name);  // pointwise|local|global

struct Options {
  // hard ceilings; enumeration refuses rather than sample when exceeded.
  // inputBudget bounds the tuples (or tuple pairs) walked, tauBudget the
  // intervention space of a single literal scan.
  long long inputBudget = 1 << 20;
  long long tauBudget = 1 << 20;
  // skip the per-variable structural shortcut and enumerate every
  // intervention; for cross validating the shortcut on small cases
  bool forceLiteral = false;
};

struct Counterexample {
  std::vector<Value> u;       // the graph was emitted here
  std::vector<Value> uPrime;  // and evaluated here (= u except global levels)
  std::optional<std::map<std::string, Value>> tau;
  std::string variable;  // where the mismatch shows
  std::string expected;  // reference value name
  std::string got;       // model value name
  std::string note;
};

struct Verdict {
  bool pass = true;
  std::optional<Counterexample> counterexample;
  long long checked = 0;                 // agreement comparisons performed
  unsigned long long skippedTau = 0;     // interventions naming variables
                                         // absent from the evaluated run
};

// does evaluating the emitted graph reproduce the program? pointwise asks
// at the emission inputs only, global across all input pairs. levels are
// pointwise|global; the first failing pair in lexicographic order is
// reported.
Verdict checkFunctional(const slp::Program& p, const Domain& d, slp::SemanticsKind kind,
                        Level level, const Options& opts = {});

// same question under interventions: the graph's causal reading must
// match the program's reference causal function on the full valuation
// over the run's instances, for every partial intervention on them.
// pointwise: no interventions; local: all interventions at the emission
// inputs; global: across all input pairs too.
Verdict checkCausal(const slp::Program& p, const Domain& d, slp::SemanticsKind kind,
                    Level level, const Options& opts = {});

struct Probe {
  Value expected = 0;  // reference value at the variable
  Value got = 0;       // model value
  bool agree = false;
};

// recompute a single intervention by hand: emit at u, force tau, read
// `variable`, against the reference
Probe probeCausal(const slp::Program& p, const Domain& d, slp::SemanticsKind kind,
                  std::span<const Value> u, const std::map<std::string, Value>& tau,
                  const std::string& variable, const Options& opts = {});

// the predictive power relation: u ~> u' when the graph emitted at u
// still answers correctly at u' (functional: result agreement; causal:
// agreement under every intervention as in checkCausal)
class PowerRelation {
 public:
  PowerRelation(int inputCount, int domainSize,
                std::vector<std::pair<std::vector<Value>, std::vector<Value>>> pairs);

  int inputCount() const { return inputCount_; }
  int domainSize() const { return domainSize_; }
  const std::vector<std::pair<std::vector<Value>, std::vector<Value>>>& pairs() const {
    return pairs_;
  }
  bool contains(std::span<const Value> u, std::span<const Value> uPrime) const;

  // recomputed from the pair set every time, never cached
  bool reflexive() const;
  bool total() const;

 private:
  int inputCount_ = 0;
  int domainSize_ = 0;
  std::vector<std::pair<std::vector<Value>, std::vector<Value>>> pairs_;  // sorted
};

PowerRelation power(const slp::Program& p, const Domain& d, slp::SemanticsKind kind,
                    Mode mode, const Options& opts = {});

enum class Ordering { Less, Greater, Equal, Incomparable };

// set inclusion both ways; requires the same input space
Ordering compare(const PowerRelation& a, const PowerRelation& b);

}  // namespace provcausal::approx
