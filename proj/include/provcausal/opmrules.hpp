#pragma once

#include <string>
#include <vector>

#include "provcausal/hpcause.hpp"
#include "provcausal/provgraph.hpp"
#include "provcausal/translate.hpp"

namespace provcausal::opmrules {

struct Edge {
  std::string from, to;
  bool operator==(const Edge&) const = default;
  bool operator<(const Edge& o) const {
    return from != o.from ? from < o.from : to < o.to;
  }
};

// the two base relations read off a graph plus the four derived ones.
// every list is sorted by (from, to) and duplicate free; the closures
// contain their base relations.
struct EdgeBase {
  std::vector<Edge> used;              // (process, artifact)
  std::vector<Edge> wasGeneratedBy;    // (artifact, process)
  std::vector<Edge> wasDerivedFrom;    // (artifact, artifact)
  std::vector<Edge> wasTriggeredBy;    // (process, process)
  std::vector<Edge> wasDerivedFromPlus;
  std::vector<Edge> wasTriggeredByPlus;
};

// derives wasDerivedFrom(x,y) wherever x wasGeneratedBy p and p used y,
// wasTriggeredBy(p,q) wherever p used x and x wasGeneratedBy q, then the
// transitive closures by delta iteration. needs a structurally valid graph.
EdgeBase infer(const provgraph::ProvGraph& g);

struct AuditOptions {
  translate::Options translate;
  int maxCauseSize = 3;
};

struct AuditRow {
  std::string relation;  // wasDerivedFrom, wasDerivedFrom+, wasTriggeredBy, wasTriggeredBy+
  std::string from, to;
  bool sound = false;
  // for sound edges: a minimal cause set containing `to`, with its witness
  std::vector<hpcause::VarVal> cause;
  hpcause::Witness witness;
};

struct AuditReport {
  std::vector<AuditRow> rows;  // relation then (from, to) order
  int sound = 0;
  int spurious = 0;
  int maxCauseSize = 3;
};

// classifies each derived edge against cause queries in the graph's
// causal reading. a single step edge is sound when `to`'s value is part
// of an actual cause of `from`'s value and no node strictly between them
// (reachable both ways in the closure) carries the causal load; a closure
// edge is sound on the cause condition alone. closure rows cover only the
// pairs the closure adds beyond the base relation, so each underlying
// claim is audited once. refuses graphs whose labels break an equation.
AuditReport audit(const provgraph::ProvGraph& g, const provgraph::Interpretation& interp,
                  const AuditOptions& opts = {});

struct ConjectureReport {
  // artifact pairs where the closure claims derivation but no bounded
  // cause supports it
  std::vector<Edge> derivedNotCausal;
  // artifact pairs where a cause exists but the closure is silent
  std::vector<Edge> causalNotDerived;
  int maxCauseSize = 3;
  bool ok() const { return derivedNotCausal.empty() && causalNotDerived.empty(); }
};

// tests wasDerivedFrom+(x,y) against "y's value is part of an actual
// cause of x's value" over every ordered artifact pair, both directions,
// causes bounded by maxCauseSize
ConjectureReport checkConjecture(const provgraph::ProvGraph& g,
                                 const provgraph::Interpretation& interp,
                                 const AuditOptions& opts = {});

}  // namespace provcausal::opmrules
