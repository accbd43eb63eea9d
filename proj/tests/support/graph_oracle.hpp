#pragma once

// independent recomputation of the derivation and triggering relations:
// base pairs read straight off the edge lists, closures by plain depth
// first reachability. the library's delta iteration is checked against
// this.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "provcausal/opmrules.hpp"
#include "provcausal/provgraph.hpp"

namespace testsupport {

using StrPair = std::pair<std::string, std::string>;
using PairSet = std::set<StrPair>;

inline PairSet reachClosure(const PairSet& base) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& [a, b] : base) adj[a].push_back(b);
  PairSet out;
  for (const auto& [start, firsts] : adj) {
    std::set<std::string> seen;
    std::vector<std::string> stack = firsts;
    while (!stack.empty()) {
      std::string at = stack.back();
      stack.pop_back();
      if (!seen.insert(at).second) continue;
      out.insert({start, at});
      auto it = adj.find(at);
      if (it != adj.end())
        for (const auto& next : it->second) stack.push_back(next);
    }
  }
  return out;
}

struct NaiveEdges {
  PairSet used, wgb, wdf, wtb, wdfPlus, wtbPlus;
};

inline NaiveEdges naiveInfer(const provcausal::provgraph::ProvGraph& g) {
  NaiveEdges e;
  for (const auto& u : g.used) e.used.insert({u.process, u.artifact});
  for (const auto& ge : g.generated) e.wgb.insert({ge.artifact, ge.process});
  for (const auto& [x, p] : e.wgb)
    for (const auto& [q, y] : e.used)
      if (p == q) e.wdf.insert({x, y});
  for (const auto& [p, x] : e.used)
    for (const auto& [y, q] : e.wgb)
      if (x == y) e.wtb.insert({p, q});
  e.wdfPlus = reachClosure(e.wdf);
  e.wtbPlus = reachClosure(e.wtb);
  return e;
}

inline PairSet toSet(const std::vector<provcausal::opmrules::Edge>& edges) {
  PairSet out;
  for (const auto& e : edges) out.insert({e.from, e.to});
  return out;
}

}  // namespace testsupport
