#include "provcausal/opmrules.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace provcausal::opmrules {

namespace {

void canonicalize(std::vector<Edge>& edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

// transitive closure by delta iteration over R+(x,y) :- R(x,y) | R(x,z) & R+(z,y)
std::vector<Edge> closure(const std::vector<Edge>& base) {
  std::map<std::string, std::vector<std::string>> into;  // z -> all x with base(x,z)
  for (const auto& e : base) into[e.to].push_back(e.from);
  std::set<std::pair<std::string, std::string>> plus;
  std::vector<Edge> delta;
  for (const auto& e : base)
    if (plus.insert({e.from, e.to}).second) delta.push_back(e);
  while (!delta.empty()) {
    std::vector<Edge> next;
    for (const auto& d : delta) {
      auto it = into.find(d.from);
      if (it == into.end()) continue;
      for (const auto& x : it->second)
        if (plus.insert({x, d.to}).second) next.push_back({x, d.to});
    }
    delta = std::move(next);
  }
  std::vector<Edge> out;
  out.reserve(plus.size());
  for (const auto& [f, t] : plus) out.push_back({f, t});
  return out;  // set order is already (from, to)
}

void requireStructure(const provgraph::ProvGraph& g) {
  auto rep = provgraph::validate(g);
  if (!rep.ok()) {
    std::string msg = "graph is not valid:";
    for (const auto& v : rep.violations) msg += "\n  [" + v.code + "] " + v.message;
    throw Error(msg);
  }
}

}  // namespace

EdgeBase infer(const provgraph::ProvGraph& g) {
  requireStructure(g);
  EdgeBase eb;
  for (const auto& e : g.used) eb.used.push_back({e.process, e.artifact});
  for (const auto& e : g.generated) eb.wasGeneratedBy.push_back({e.artifact, e.process});
  canonicalize(eb.used);
  canonicalize(eb.wasGeneratedBy);

  std::map<std::string, std::vector<std::string>> usedBy;  // process -> artifacts
  for (const auto& e : eb.used) usedBy[e.from].push_back(e.to);
  std::map<std::string, std::string> generatorOf;
  for (const auto& e : eb.wasGeneratedBy) generatorOf[e.from] = e.to;

  for (const auto& [x, p] : eb.wasGeneratedBy) {
    auto it = usedBy.find(p);
    if (it == usedBy.end()) continue;
    for (const auto& y : it->second) eb.wasDerivedFrom.push_back({x, y});
  }
  canonicalize(eb.wasDerivedFrom);

  for (const auto& [p, x] : eb.used) {
    auto it = generatorOf.find(x);
    if (it != generatorOf.end()) eb.wasTriggeredBy.push_back({p, it->second});
  }
  canonicalize(eb.wasTriggeredBy);

  eb.wasDerivedFromPlus = closure(eb.wasDerivedFrom);
  eb.wasTriggeredByPlus = closure(eb.wasTriggeredBy);
  return eb;
}

namespace {

// shared setup for audit and conjecture: derived edges plus a cause
// engine over the graph's causal reading
struct CausalView {
  EdgeBase edges;
  hpcause::Situation situation;
  hpcause::Engine engine;
  std::set<std::pair<std::string, std::string>> dfPlus, tbPlus;

  static hpcause::Situation makeSituation(const provgraph::ProvGraph& g,
                                          const provgraph::Interpretation& interp,
                                          const AuditOptions& opts) {
    auto rep = provgraph::validate(g, interp);
    if (!rep.ok()) {
      std::string msg = "graph is not valid:";
      for (const auto& v : rep.violations) msg += "\n  [" + v.code + "] " + v.message;
      throw Error(msg);
    }
    auto ts = translate::toCausal(g, interp, opts.translate);
    if (!ts.consistent) {
      std::string msg = "labels are inconsistent with the interpretation at:";
      for (const auto& n : ts.inconsistentAt) msg += " " + n;
      throw Error(msg);
    }
    return hpcause::Situation::fromValuation(ts.model, ts.values);
  }

  CausalView(const provgraph::ProvGraph& g, const provgraph::Interpretation& interp,
             const AuditOptions& opts)
      : edges(infer(g)), situation(makeSituation(g, interp, opts)), engine(situation) {
    if (opts.maxCauseSize < 1) throw Error("maxCauseSize must be at least 1");
    for (const auto& e : edges.wasDerivedFromPlus) dfPlus.insert({e.from, e.to});
    for (const auto& e : edges.wasTriggeredByPlus) tbPlus.insert({e.from, e.to});
  }

  bool partOf(const std::string& member, const std::string& target, int maxSize) {
    const auto& cm = situation.compiled();
    return engine.partOf(cm.endoIndex(member), cm.endoIndex(target), maxSize);
  }
};

}  // namespace

AuditReport audit(const provgraph::ProvGraph& g, const provgraph::Interpretation& interp,
                  const AuditOptions& opts) {
  CausalView view(g, interp, opts);
  const auto& cm = view.situation.compiled();
  AuditReport report;
  report.maxCauseSize = opts.maxCauseSize;

  auto emit = [&](const std::string& relation, const Edge& e, bool oneStep,
                  const std::set<std::pair<std::string, std::string>>& plus,
                  const std::vector<std::string>& nodes) {
    AuditRow row;
    row.relation = relation;
    row.from = e.from;
    row.to = e.to;
    const hpcause::CauseSet* cs = view.engine.supportingCause(
        cm.endoIndex(e.to), cm.endoIndex(e.from), opts.maxCauseSize);
    bool sound = cs != nullptr;
    if (sound && oneStep) {
      // the single step reading also demands no node in between carries
      // the causal link: z reachable from `from` and reaching `to` in the
      // closure, z part of a cause of `from`, `to` part of a cause of z
      for (const auto& z : nodes) {
        if (z == e.from || z == e.to) continue;
        if (!plus.count({e.from, z}) || !plus.count({z, e.to})) continue;
        if (view.partOf(z, e.from, opts.maxCauseSize) &&
            view.partOf(e.to, z, opts.maxCauseSize)) {
          sound = false;
          break;
        }
      }
    }
    row.sound = sound;
    if (sound) {
      row.cause = cs->members;
      row.witness = cs->witness;
    }
    (sound ? report.sound : report.spurious)++;
    report.rows.push_back(std::move(row));
  };

  std::vector<std::string> artifactIds, processIds;
  for (const auto& a : g.artifacts) artifactIds.push_back(a.id);
  for (const auto& p : g.processes) processIds.push_back(p.id);
  std::sort(artifactIds.begin(), artifactIds.end());
  std::sort(processIds.begin(), processIds.end());

  std::set<std::pair<std::string, std::string>> dfBase, tbBase;
  for (const auto& e : view.edges.wasDerivedFrom) dfBase.insert({e.from, e.to});
  for (const auto& e : view.edges.wasTriggeredBy) tbBase.insert({e.from, e.to});

  for (const auto& e : view.edges.wasDerivedFrom)
    emit("wasDerivedFrom", e, true, view.dfPlus, artifactIds);
  // closure rows cover only what the closure adds beyond the base edges
  for (const auto& e : view.edges.wasDerivedFromPlus)
    if (!dfBase.count({e.from, e.to})) emit("wasDerivedFrom+", e, false, view.dfPlus, artifactIds);
  for (const auto& e : view.edges.wasTriggeredBy)
    emit("wasTriggeredBy", e, true, view.tbPlus, processIds);
  for (const auto& e : view.edges.wasTriggeredByPlus)
    if (!tbBase.count({e.from, e.to})) emit("wasTriggeredBy+", e, false, view.tbPlus, processIds);

  return report;
}

ConjectureReport checkConjecture(const provgraph::ProvGraph& g,
                                 const provgraph::Interpretation& interp,
                                 const AuditOptions& opts) {
  CausalView view(g, interp, opts);
  ConjectureReport report;
  report.maxCauseSize = opts.maxCauseSize;

  std::vector<std::string> artifactIds;
  for (const auto& a : g.artifacts) artifactIds.push_back(a.id);
  std::sort(artifactIds.begin(), artifactIds.end());

  for (const auto& x : artifactIds) {
    for (const auto& y : artifactIds) {
      if (x == y) continue;
      bool derived = view.dfPlus.count({x, y}) > 0;
      bool causal = view.partOf(y, x, opts.maxCauseSize);
      if (derived && !causal) report.derivedNotCausal.push_back({x, y});
      if (causal && !derived) report.causalNotDerived.push_back({x, y});
    }
  }
  return report;
}

}  // namespace provcausal::opmrules
