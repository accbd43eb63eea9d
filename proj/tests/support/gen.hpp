#pragma once

// random fixtures for the cross checks: small structural causal models
// and layered labeled provenance graphs. construction is generative, so
// models are acyclic and graphs structurally valid by build.

#include <string>
#include <utility>
#include <vector>

#include "provcausal/causal.hpp"
#include "provcausal/provgraph.hpp"
#include "rng.hpp"

namespace testsupport {

using provcausal::Domain;
using provcausal::FunctionSpec;

// complete random table over the bool domain: every argument row in
// order, first argument most significant
inline FunctionSpec randomBoolTable(Rng& r, int arity) {
  FunctionSpec fn;
  const int rows = 1 << arity;
  for (int row = 0; row < rows; ++row) {
    std::vector<std::string> cells;
    for (int a = arity - 1; a >= 0; --a)
      cells.push_back((row >> a) & 1 ? "1" : "0");
    cells.push_back(r.below(2) ? "1" : "0");
    fn.table.push_back(std::move(cells));
  }
  return fn;
}

inline FunctionSpec randomBoolFn(Rng& r, int arity) {
  if (r.chance(60)) return randomBoolTable(r, arity);
  if (arity == 1) {
    static const char* ops[] = {"not", "copy", "and", "or", "xor"};
    return FunctionSpec::fromBuiltin(ops[r.below(5)]);
  }
  static const char* ops[] = {"and", "or", "xor"};
  return FunctionSpec::fromBuiltin(ops[r.below(3)]);
}

// acyclic boolean model: 1..3 exogenous, 1..maxEndo endogenous, each
// equation reading up to 3 earlier variables, with a random context
inline provcausal::causal::CausalModel randomBoolModel(Rng& r, int maxEndo = 5) {
  provcausal::causal::CausalModel m;
  m.domain = Domain::boolean();
  const int nu = 1 + r.below(3);
  for (int i = 1; i <= nu; ++i) m.exogenous.push_back("U" + std::to_string(i));
  const int nv = 1 + r.below(maxEndo);
  std::vector<std::string> pool = m.exogenous;
  for (int i = 1; i <= nv; ++i) {
    provcausal::causal::Equation eq;
    eq.name = "V" + std::to_string(i);
    const int avail = static_cast<int>(pool.size());
    const int want = 1 + r.below(avail < 3 ? avail : 3);
    std::vector<int> taken;
    while (static_cast<int>(taken.size()) < want) {
      int pick = r.below(avail);
      bool dup = false;
      for (int t : taken) dup = dup || t == pick;
      if (!dup) taken.push_back(pick);
    }
    for (int t : taken) eq.parents.push_back(pool[static_cast<size_t>(t)]);
    eq.fn = randomBoolFn(r, want);
    m.endogenous.push_back(std::move(eq));
    pool.push_back("V" + std::to_string(i));
  }
  for (const auto& u : m.exogenous)
    m.context[u] = r.below(2) ? "1" : "0";
  return m;
}

struct GraphFixture {
  provcausal::provgraph::ProvGraph graph;
  provcausal::provgraph::Interpretation interp;
};

// layered boolean graph: input artifacts a1.., then processes p1..pN in
// sequence, each using existing artifacts and generating b<i>. one fresh
// operation per process. labels come from an actual evaluation, so the
// fixture is always consistent.
inline GraphFixture randomGraph(Rng& r, int nInputs, int nProcesses, int maxArity = 3) {
  namespace pg = provcausal::provgraph;
  GraphFixture fx;
  pg::ProvGraph& g = fx.graph;
  g.domain = Domain::boolean();

  std::vector<std::string> pool;
  for (int i = 1; i <= nInputs; ++i) {
    std::string id = "a" + std::to_string(i);
    g.artifacts.push_back(pg::Artifact{id, "0", true});
    g.inputs.push_back(id);
    pool.push_back(id);
  }
  for (int i = 1; i <= nProcesses; ++i) {
    std::string pid = "p" + std::to_string(i);
    std::string op = "f" + std::to_string(i);
    const int arity = 1 + r.below(maxArity);
    g.processes.push_back(pg::Process{pid, op});
    for (int port = 1; port <= arity; ++port) {
      const std::string& src = pool[static_cast<size_t>(r.below(static_cast<int>(pool.size())))];
      g.used.push_back(pg::UsedEdge{pid, src, port});
    }
    std::string out = "b" + std::to_string(i);
    g.artifacts.push_back(pg::Artifact{out, "0", false});
    g.generated.push_back(pg::GenEdge{out, pid});
    pool.push_back(out);
    fx.interp.ops.push_back(pg::OpSpec{op, arity, randomBoolFn(r, arity)});
  }
  g.result = "b" + std::to_string(nProcesses);

  // pick inputs, evaluate, write every label back
  std::vector<provcausal::Value> in;
  for (int i = 0; i < nInputs; ++i) in.push_back(static_cast<provcausal::Value>(r.below(2)));
  pg::Evaluator ev(g, fx.interp);
  auto res = ev.evaluate(in);
  for (auto& a : g.artifacts) a.value = g.domain.valueName(res.values.at(a.id));
  return fx;
}

}  // namespace testsupport
