#include "provcausal/translate.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

namespace provcausal::translate {

namespace {

std::string freshName(std::string base, const std::set<std::string>& taken) {
  while (taken.count(base)) base += "_";
  return base;
}

}  // namespace

causal::Context Situation::context() const {
  causal::Context ctx;
  std::set<std::string> exo(model.exogenous.begin(), model.exogenous.end());
  for (const auto& [k, v] : values)
    if (exo.count(k)) ctx[k] = v;
  return ctx;
}

Situation toCausal(const provgraph::ProvGraph& g,
                   const provgraph::Interpretation& interp, const Options& opts) {
  provgraph::ValidationReport rep = provgraph::validate(g, interp);
  if (!rep.ok()) {
    std::string msg = "cannot translate an invalid graph:";
    for (const auto& v : rep.violations) msg += "\n  [" + v.code + "] " + v.message;
    throw Error(msg);
  }

  const Domain& d = g.domain;
  std::map<std::string, const provgraph::Artifact*> artifact;
  for (const auto& a : g.artifacts) artifact[a.id] = &a;
  std::map<std::string, const provgraph::Process*> process;
  for (const auto& p : g.processes) process[p.id] = &p;

  std::map<std::string, std::string> generatorOf;   // artifact -> process
  std::map<std::string, std::string> generatedBy;   // process -> artifact
  for (const auto& e : g.generated) {
    generatorOf[e.artifact] = e.process;
    generatedBy[e.process] = e.artifact;
  }
  std::map<std::string, std::vector<std::string>> portArgs;  // process -> used, port order
  for (const auto& p : g.processes) {
    std::vector<std::pair<int, std::string>> uses;
    for (const auto& e : g.used)
      if (e.process == p.id) uses.emplace_back(e.port, e.artifact);
    std::sort(uses.begin(), uses.end());
    auto& args = portArgs[p.id];
    for (auto& [port, art] : uses) args.push_back(art);
  }

  std::set<std::string> taken;
  for (const auto& a : g.artifacts) taken.insert(a.id);
  for (const auto& p : g.processes) taken.insert(p.id);

  Situation s;
  s.model.domain = d;

  std::map<std::string, std::string> feederOf;  // input artifact -> exogenous feeder
  if (opts.endogenizeInputs) {
    for (const auto& id : g.inputs) {
      std::string f = freshName("u_" + id, taken);
      taken.insert(f);
      feederOf[id] = f;
      s.model.exogenous.push_back(f);
    }
  } else {
    for (const auto& id : g.inputs) s.model.exogenous.push_back(id);
  }

  std::map<std::string, std::string> faultOf;  // process -> exogenous fault term
  if (opts.faultTerms) {
    // checked up front so a bad combiner fails before any equations exist
    CompiledFn::compile(FunctionSpec::fromBuiltin(opts.faultCombiner), d, 2,
                        "fault combiner");
    for (const auto& p : g.processes) {
      std::string f = freshName("u_" + p.id, taken);
      taken.insert(f);
      faultOf[p.id] = f;
      s.model.exogenous.push_back(f);
    }
  }

  // endogenous order: input copies first, then the remaining nodes in a
  // deterministic topological order of the data flow
  const int nA = static_cast<int>(g.artifacts.size());
  const int nP = static_cast<int>(g.processes.size());
  const int n = nA + nP;
  std::map<std::string, int> nodeIdx;
  for (int i = 0; i < nA; ++i) nodeIdx[g.artifacts[static_cast<size_t>(i)].id] = i;
  for (int i = 0; i < nP; ++i) nodeIdx[g.processes[static_cast<size_t>(i)].id] = nA + i;
  std::vector<std::vector<int>> out(static_cast<size_t>(n));
  std::vector<int> indeg(static_cast<size_t>(n), 0);
  for (const auto& e : g.used) {
    out[static_cast<size_t>(nodeIdx.at(e.artifact))].push_back(nodeIdx.at(e.process));
    ++indeg[static_cast<size_t>(nodeIdx.at(e.process))];
  }
  for (const auto& e : g.generated) {
    out[static_cast<size_t>(nodeIdx.at(e.process))].push_back(nodeIdx.at(e.artifact));
    ++indeg[static_cast<size_t>(nodeIdx.at(e.artifact))];
  }
  std::vector<int> ready;
  for (int v = 0; v < n; ++v)
    if (indeg[static_cast<size_t>(v)] == 0) ready.push_back(v);
  std::vector<int> order;
  while (!ready.empty()) {
    auto pick = std::min_element(ready.begin(), ready.end());
    int v = *pick;
    ready.erase(pick);
    order.push_back(v);
    for (int w : out[static_cast<size_t>(v)])
      if (--indeg[static_cast<size_t>(w)] == 0) ready.push_back(w);
  }

  auto opOf = [&interp](const std::string& name) { return interp.find(name); };

  if (opts.endogenizeInputs)
    for (const auto& id : g.inputs) {
      causal::Equation eq;
      eq.name = id;
      eq.parents = {feederOf.at(id)};
      eq.fn = FunctionSpec::fromBuiltin("copy");
      s.model.endogenous.push_back(std::move(eq));
    }

  for (int v : order) {
    if (v < nA) {
      const auto& a = g.artifacts[static_cast<size_t>(v)];
      if (a.input) continue;  // handled above or exogenous
      causal::Equation eq;
      eq.name = a.id;
      eq.parents = {generatorOf.at(a.id)};
      eq.fn = FunctionSpec::fromBuiltin("copy");
      s.model.endogenous.push_back(std::move(eq));
    } else {
      const auto& p = g.processes[static_cast<size_t>(v - nA)];
      const provgraph::OpSpec* op = opOf(p.name);
      causal::Equation eq;
      eq.name = p.id;
      eq.parents = portArgs.at(p.id);
      if (!opts.faultTerms) {
        eq.fn = op->fn;
      } else {
        // expand op then combiner into one table over arity + 1 arguments
        CompiledFn opFn = CompiledFn::compile(op->fn, d, op->arity, "op '" + op->name + "'");
        CompiledFn comb = CompiledFn::compile(FunctionSpec::fromBuiltin(opts.faultCombiner),
                                              d, 2, "fault combiner");
        eq.parents.push_back(faultOf.at(p.id));
        const int m = d.size();
        std::int64_t rows = 1;
        for (int i = 0; i < op->arity + 1; ++i) rows *= m;
        std::vector<Value> args(static_cast<size_t>(op->arity) + 1, 0);
        FunctionSpec table;
        for (std::int64_t idx = 0; idx < rows; ++idx) {
          std::int64_t rem = idx;
          for (int a2 = op->arity; a2 >= 0; --a2) {
            args[static_cast<size_t>(a2)] = static_cast<Value>(rem % m);
            rem /= m;
          }
          Value base = opFn.apply(std::span<const Value>(args.data(),
                                                         static_cast<size_t>(op->arity)));
          Value combined = comb.apply(std::array<Value, 2>{base, args.back()});
          std::vector<std::string> row;
          for (int a2 = 0; a2 <= op->arity; ++a2)
            row.push_back(d.valueName(args[static_cast<size_t>(a2)]));
          row.push_back(d.valueName(combined));
          table.table.push_back(std::move(row));
        }
        eq.fn = std::move(table);
      }
      s.model.endogenous.push_back(std::move(eq));
    }
  }

  // the labeled valuation: artifacts carry their labels, a process takes
  // the value of the artifact it generates, feeders mirror their inputs,
  // fault terms default to the first domain value
  for (const auto& a : g.artifacts)
    s.values[a.id] = d.requireValue(a.value, "artifact '" + a.id + "'");
  for (const auto& p : g.processes)
    s.values[p.id] = s.values.at(generatedBy.at(p.id));
  for (const auto& [id, f] : feederOf) s.values[f] = s.values.at(id);
  for (const auto& [id, f] : faultOf) s.values[f] = d.zero();

  causal::ConsistencyReport cons = causal::isConsistent({s.model, s.values});
  s.consistent = cons.consistent;
  s.inconsistentAt = cons.mismatched;
  return s;
}

bool roundTrip(const provgraph::ProvGraph& g, const provgraph::Interpretation& interp,
               const Options& opts) {
  Situation s = toCausal(g, interp, opts);
  causal::Valuation solved = causal::solve(s.model, s.context());
  for (const auto& a : g.artifacts) {
    Value label = g.domain.requireValue(a.value, "artifact '" + a.id + "'");
    if (solved.at(a.id) != label) return false;
  }
  return true;
}

}  // namespace provcausal::translate
