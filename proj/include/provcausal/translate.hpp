#pragma once

#include <string>
#include <vector>

#include "provcausal/causal.hpp"
#include "provcausal/provgraph.hpp"

namespace provcausal::translate {

struct Options {
  // when on, every process gets a fresh exogenous fault parent combined
  // into its equation with faultCombiner (an arity 2 builtin over D)
  bool faultTerms = false;
  std::string faultCombiner = "xor";
  // when on, each input artifact becomes an endogenous copy of a fresh
  // exogenous feeder, so inputs can appear in cause candidates. off gives
  // the bare reading where input artifacts are the exogenous variables.
  bool endogenizeInputs = true;
};

struct Situation {
  causal::CausalModel model;
  causal::Valuation values;  // labels read as a valuation over U and V
  bool consistent = true;
  std::vector<std::string> inconsistentAt;

  causal::Context context() const;  // exogenous part of values
};

// reads a labeled graph as a causal situation. processes become variables
// computing their interpreted operation over the used artifacts, each
// artifact copies its generating process. fault exogenous variables
// default to the first domain value. labels that contradict the equations
// are flagged, not rejected.
Situation toCausal(const provgraph::ProvGraph& g,
                   const provgraph::Interpretation& interp,
                   const Options& opts = {});

// true when solving the model from the input labels reproduces the label
// of every node
bool roundTrip(const provgraph::ProvGraph& g, const provgraph::Interpretation& interp,
               const Options& opts = {});

}  // namespace provcausal::translate
