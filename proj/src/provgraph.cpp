#include "provcausal/provgraph.hpp"

#include "provcausal/json_util.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace provcausal::provgraph {

const OpSpec* Interpretation::find(const std::string& name) const {
  for (const auto& op : ops)
    if (op.name == name) return &op;
  return nullptr;
}

namespace {

struct Index {
  std::map<std::string, int> artifact;
  std::map<std::string, int> process;
};

Index buildIndex(const ProvGraph& g, ValidationReport* rep) {
  Index ix;
  for (int i = 0; i < static_cast<int>(g.artifacts.size()); ++i) {
    const auto& a = g.artifacts[i];
    if (!ix.artifact.emplace(a.id, i).second && rep)
      rep->violations.push_back({"duplicate-id", "duplicate artifact id '" + a.id + "'"});
  }
  for (int i = 0; i < static_cast<int>(g.processes.size()); ++i) {
    const auto& p = g.processes[i];
    if (!ix.process.emplace(p.id, i).second && rep)
      rep->violations.push_back({"duplicate-id", "duplicate process id '" + p.id + "'"});
    if (ix.artifact.count(p.id) && rep)
      rep->violations.push_back(
          {"duplicate-id", "id '" + p.id + "' used for both an artifact and a process"});
  }
  return ix;
}

ValidationReport validateImpl(const ProvGraph& g, const Interpretation* interp) {
  ValidationReport rep;
  auto add = [&rep](const std::string& code, const std::string& msg) {
    rep.violations.push_back({code, msg});
  };

  Index ix = buildIndex(g, &rep);

  // interpretation is checked as a whole: totality means every op compiles
  std::map<std::string, const OpSpec*> opsByName;
  if (interp) {
    for (const auto& op : interp->ops) {
      if (!opsByName.emplace(op.name, &op).second)
        add("interp-duplicate", "duplicate interpretation entry '" + op.name + "'");
      try {
        CompiledFn::compile(op.fn, g.domain, op.arity, "op '" + op.name + "'");
      } catch (const Error& e) {
        add("interp-bad-function", e.what());
      }
    }
  }

  for (const auto& a : g.artifacts) {
    if (!g.domain.parseValue(a.value))
      add("bad-label",
          "artifact '" + a.id + "' label '" + a.value + "' is not a domain value");
  }

  // edge endpoint kinds. a used edge should join a process to an artifact,
  // a generated edge an artifact to a process.
  auto kindOf = [&ix](const std::string& id) -> const char* {
    if (ix.artifact.count(id)) return "artifact";
    if (ix.process.count(id)) return "process";
    return nullptr;
  };
  for (const auto& e : g.used) {
    const char* pk = kindOf(e.process);
    const char* ak = kindOf(e.artifact);
    if (!pk || !ak) {
      add("dangling-edge", "used edge (" + e.process + ", " + e.artifact +
                               ") references a missing node");
      continue;
    }
    if (std::string(pk) != "process" || std::string(ak) != "artifact")
      add("bipartite", "used edge joins " + std::string(pk) + " '" + e.process +
                           "' to " + ak + " '" + e.artifact + "'");
    if (e.port < 1)
      add("bad-port", "used edge (" + e.process + ", " + e.artifact +
                          ") has port " + std::to_string(e.port) + " < 1");
  }
  for (const auto& e : g.generated) {
    const char* ak = kindOf(e.artifact);
    const char* pk = kindOf(e.process);
    if (!ak || !pk) {
      add("dangling-edge", "generated edge (" + e.artifact + ", " + e.process +
                               ") references a missing node");
      continue;
    }
    if (std::string(ak) != "artifact" || std::string(pk) != "process")
      add("bipartite", "generated edge joins " + std::string(ak) + " '" + e.artifact +
                           "' to " + pk + " '" + e.process + "'");
  }

  // generator counts
  std::map<std::string, int> genOfArtifact, genOfProcess;
  for (const auto& e : g.generated) {
    if (ix.artifact.count(e.artifact) && ix.process.count(e.process)) {
      genOfArtifact[e.artifact]++;
      genOfProcess[e.process]++;
    }
  }
  for (const auto& a : g.artifacts) {
    int n = genOfArtifact.count(a.id) ? genOfArtifact[a.id] : 0;
    if (a.input && n > 0)
      add("input-generated", "input artifact '" + a.id + "' has a generating process");
    if (!a.input && n == 0)
      add("no-generator", "artifact '" + a.id + "' has no generating process");
    if (n > 1)
      add("multiple-generators",
          "artifact '" + a.id + "' has " + std::to_string(n) + " generating processes");
  }
  for (const auto& p : g.processes) {
    int n = genOfProcess.count(p.id) ? genOfProcess[p.id] : 0;
    if (n != 1)
      add("not-functional", "process '" + p.id + "' generates " + std::to_string(n) +
                                " artifacts, expected exactly 1");
  }

  // sortedness: used edges of each process fill ports 1..n exactly, where
  // n matches the operation's arity once an interpretation is in play
  for (const auto& p : g.processes) {
    std::vector<int> ports;
    for (const auto& e : g.used)
      if (e.process == p.id && ix.artifact.count(e.artifact)) ports.push_back(e.port);
    const int total = static_cast<int>(ports.size());
    std::vector<int> portCount(static_cast<size_t>(total) + 1, 0);
    for (int port : ports)
      if (port >= 1 && port <= total) ++portCount[static_cast<size_t>(port)];
    for (int port = 1; port <= total; ++port) {
      if (portCount[static_cast<size_t>(port)] == 0)
        add("missing-port", "process '" + p.id + "' has no used edge on port " +
                                std::to_string(port));
      else if (portCount[static_cast<size_t>(port)] > 1)
        add("duplicate-port", "process '" + p.id + "' has multiple used edges on port " +
                                  std::to_string(port));
    }
    if (!interp) continue;
    auto it = opsByName.find(p.name);
    if (it == opsByName.end()) {
      add("unknown-op", "process '" + p.id + "' names operation '" + p.name +
                            "' missing from the interpretation");
      continue;
    }
    if (total != it->second->arity)
      add("arity-mismatch", "process '" + p.id + "' has " + std::to_string(total) +
                                " used edges, operation '" + p.name + "' has arity " +
                                std::to_string(it->second->arity));
  }

  // result and declared inputs
  if (!ix.artifact.count(g.result))
    add("no-result", "result '" + g.result + "' is not an artifact of the graph");
  std::set<std::string> declared;
  for (const auto& id : g.inputs) {
    if (!declared.insert(id).second)
      add("input-list", "input '" + id + "' listed more than once");
    auto it = ix.artifact.find(id);
    if (it == ix.artifact.end()) {
      add("input-list", "declared input '" + id + "' is not an artifact");
      continue;
    }
    if (!g.artifacts[static_cast<size_t>(it->second)].input)
      add("input-list", "declared input '" + id + "' is not flagged as input");
  }
  for (const auto& a : g.artifacts)
    if (a.input && !declared.count(a.id))
      add("input-list", "artifact '" + a.id + "' is flagged input but not declared");

  // acyclicity over the data flow direction: artifact -> process on used
  // edges, process -> artifact on generated edges. only well formed edges
  // take part, broken ones were already reported.
  const int nA = static_cast<int>(g.artifacts.size());
  const int nP = static_cast<int>(g.processes.size());
  const int n = nA + nP;
  std::vector<std::vector<int>> adj(static_cast<size_t>(n));
  auto nodeName = [&](int v) {
    return v < nA ? g.artifacts[static_cast<size_t>(v)].id
                  : g.processes[static_cast<size_t>(v - nA)].id;
  };
  for (const auto& e : g.used) {
    auto ai = ix.artifact.find(e.artifact);
    auto pi = ix.process.find(e.process);
    if (ai != ix.artifact.end() && pi != ix.process.end())
      adj[static_cast<size_t>(ai->second)].push_back(nA + pi->second);
  }
  for (const auto& e : g.generated) {
    auto ai = ix.artifact.find(e.artifact);
    auto pi = ix.process.find(e.process);
    if (ai != ix.artifact.end() && pi != ix.process.end())
      adj[static_cast<size_t>(nA + pi->second)].push_back(ai->second);
  }
  {
    std::vector<int> state(static_cast<size_t>(n), 0);  // 0 new, 1 open, 2 done
    std::vector<int> stack;
    bool cycleReported = false;
    std::function<bool(int)> dfs = [&](int v) -> bool {
      state[static_cast<size_t>(v)] = 1;
      stack.push_back(v);
      for (int w : adj[static_cast<size_t>(v)]) {
        if (state[static_cast<size_t>(w)] == 1) {
          if (!cycleReported) {
            std::string cyc;
            auto it = std::find(stack.begin(), stack.end(), w);
            for (; it != stack.end(); ++it) cyc += nodeName(*it) + " -> ";
            cyc += nodeName(w);
            add("cycle", "graph has a cycle: " + cyc);
            cycleReported = true;
          }
          return true;
        }
        if (state[static_cast<size_t>(w)] == 0 && dfs(w)) return true;
      }
      stack.pop_back();
      state[static_cast<size_t>(v)] = 2;
      return false;
    };
    for (int v = 0; v < n && !cycleReported; ++v)
      if (state[static_cast<size_t>(v)] == 0) dfs(v);
  }

  return rep;
}

}  // namespace

ValidationReport validate(const ProvGraph& g, const Interpretation& interp) {
  return validateImpl(g, &interp);
}

ValidationReport validate(const ProvGraph& g) { return validateImpl(g, nullptr); }

Evaluator::Evaluator(const ProvGraph& g, const Interpretation& interp, TieBreak tb) {
  ValidationReport rep = validate(g, interp);
  if (!rep.ok()) {
    std::string msg = "graph is not valid:";
    for (const auto& v : rep.violations) msg += "\n  [" + v.code + "] " + v.message;
    throw Error(msg);
  }

  domain_ = g.domain;
  const int nA = static_cast<int>(g.artifacts.size());
  const int nP = static_cast<int>(g.processes.size());
  const int n = nA + nP;
  Index ix = buildIndex(g, nullptr);

  nodeIds_.reserve(static_cast<size_t>(n));
  for (const auto& a : g.artifacts) nodeIds_.push_back(a.id);
  for (const auto& p : g.processes) nodeIds_.push_back(p.id);
  for (const auto& id : g.inputs) inputIdx_.push_back(ix.artifact.at(id));
  resultIdx_ = ix.artifact.at(g.result);

  fns_.reserve(g.processes.size());
  std::map<std::string, int> fnOfOp;
  for (const auto& op : interp.ops) {
    fnOfOp[op.name] = static_cast<int>(fns_.size());
    fns_.push_back(CompiledFn::compile(op.fn, g.domain, op.arity, "op '" + op.name + "'"));
  }

  // per node spec of how to compute it
  std::vector<Step> stepOf(static_cast<size_t>(n));
  std::vector<int> indeg(static_cast<size_t>(n), 0);
  std::vector<std::vector<int>> out(static_cast<size_t>(n));
  std::vector<bool> isInput(static_cast<size_t>(n), false);
  for (int i = 0; i < nA; ++i) isInput[static_cast<size_t>(i)] = g.artifacts[static_cast<size_t>(i)].input;

  for (int i = 0; i < nP; ++i) {
    const auto& p = g.processes[static_cast<size_t>(i)];
    const int node = nA + i;
    std::vector<std::pair<int, int>> byPort;  // (port, artifact node)
    for (const auto& e : g.used)
      if (e.process == p.id) byPort.emplace_back(e.port, ix.artifact.at(e.artifact));
    std::sort(byPort.begin(), byPort.end());
    Step st;
    st.node = node;
    for (auto& [port, an] : byPort) {
      st.args.push_back(an);
      out[static_cast<size_t>(an)].push_back(node);
      ++indeg[static_cast<size_t>(node)];
    }
    st.fn = &fns_[static_cast<size_t>(fnOfOp.at(p.name))];
    stepOf[static_cast<size_t>(node)] = std::move(st);
  }
  for (const auto& e : g.generated) {
    const int an = ix.artifact.at(e.artifact);
    const int pn = nA + ix.process.at(e.process);
    Step st;
    st.node = an;
    st.fn = nullptr;
    st.copyFrom = pn;
    out[static_cast<size_t>(pn)].push_back(an);
    ++indeg[static_cast<size_t>(an)];
    stepOf[static_cast<size_t>(an)] = std::move(st);
  }

  // kahn order; the tie break exercises order independence in tests
  std::vector<int> ready;
  for (int v = 0; v < n; ++v)
    if (indeg[static_cast<size_t>(v)] == 0) ready.push_back(v);
  while (!ready.empty()) {
    auto pick = tb == TieBreak::MinIndex
                    ? std::min_element(ready.begin(), ready.end())
                    : std::max_element(ready.begin(), ready.end());
    int v = *pick;
    ready.erase(pick);
    if (!(v < nA && isInput[static_cast<size_t>(v)]))
      steps_.push_back(stepOf[static_cast<size_t>(v)]);
    for (int w : out[static_cast<size_t>(v)])
      if (--indeg[static_cast<size_t>(w)] == 0) ready.push_back(w);
  }

  scratch_.assign(static_cast<size_t>(n), Value{0});
}

Evaluation Evaluator::evaluate(std::span<const Value> inputs) const {
  if (static_cast<int>(inputs.size()) != inputCount())
    throw Error("expected " + std::to_string(inputCount()) + " inputs, got " +
                std::to_string(inputs.size()));
  for (size_t i = 0; i < inputs.size(); ++i) {
    if (static_cast<int>(inputs[i]) >= domain_.size())
      throw Error("input value out of domain range");
    scratch_[static_cast<size_t>(inputIdx_[i])] = inputs[i];
  }
  std::vector<Value> argbuf;
  for (const auto& st : steps_) {
    if (st.fn) {
      argbuf.clear();
      for (int a : st.args) argbuf.push_back(scratch_[static_cast<size_t>(a)]);
      scratch_[static_cast<size_t>(st.node)] = st.fn->apply(argbuf);
    } else {
      scratch_[static_cast<size_t>(st.node)] = scratch_[static_cast<size_t>(st.copyFrom)];
    }
  }
  Evaluation ev;
  for (size_t i = 0; i < nodeIds_.size(); ++i) ev.values[nodeIds_[i]] = scratch_[i];
  ev.result = scratch_[static_cast<size_t>(resultIdx_)];
  return ev;
}

Value Evaluator::resultAt(std::span<const Value> inputs) const {
  for (size_t i = 0; i < inputs.size(); ++i)
    scratch_[static_cast<size_t>(inputIdx_[i])] = inputs[i];
  std::vector<Value> argbuf;
  for (const auto& st : steps_) {
    if (st.fn) {
      argbuf.clear();
      for (int a : st.args) argbuf.push_back(scratch_[static_cast<size_t>(a)]);
      scratch_[static_cast<size_t>(st.node)] = st.fn->apply(argbuf);
    } else {
      scratch_[static_cast<size_t>(st.node)] = scratch_[static_cast<size_t>(st.copyFrom)];
    }
  }
  return scratch_[static_cast<size_t>(resultIdx_)];
}

FunctionalSemantics::FunctionalSemantics(const ProvGraph& g, const Interpretation& interp)
    : eval_(g, interp) {}

std::vector<Value> FunctionalSemantics::tabulate() const {
  const int n = arity();
  const int m = domain().size();
  std::int64_t total = 1;
  for (int i = 0; i < n; ++i) {
    total *= m;
    if (total > (1 << 24)) throw BudgetError("input space too large to tabulate");
  }
  std::vector<Value> tuple(static_cast<size_t>(std::max(n, 0)), 0);
  std::vector<Value> out;
  out.reserve(static_cast<size_t>(total));
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::int64_t rem = idx;
    for (int i = n - 1; i >= 0; --i) {
      tuple[static_cast<size_t>(i)] = static_cast<Value>(rem % m);
      rem /= m;
    }
    out.push_back((*this)(tuple));
  }
  return out;
}

Evaluation evaluateAtLabels(const ProvGraph& g, const Interpretation& interp) {
  Evaluator ev(g, interp);
  std::map<std::string, const Artifact*> byId;
  for (const auto& a : g.artifacts) byId[a.id] = &a;
  std::vector<Value> inputs;
  for (const auto& id : g.inputs)
    inputs.push_back(g.domain.requireValue(byId.at(id)->value, "input '" + id + "'"));
  return ev.evaluate(inputs);
}

// ---- json io ----

namespace {

ProvGraph graphFromJson(const nlohmann::json& j) {
  const std::string where = "graph";
  jutil::checkKeys(j, {"domain", "artifacts", "processes", "result", "inputs"}, where);
  ProvGraph g;
  g.domain = Domain::fromJson(jutil::getField(j, "domain", where), where + ".domain");

  std::set<std::string> ids;
  for (const auto& ja : jutil::getArray(j, "artifacts", where)) {
    jutil::checkKeys(ja, {"id", "value", "input"}, where + ".artifacts");
    Artifact a;
    a.id = jutil::getString(ja, "id", where + ".artifacts");
    a.value = jutil::getString(ja, "value", where + ".artifacts");
    a.input = ja.contains("input") ? jutil::getBool(ja, "input", where + ".artifacts")
                                   : false;
    if (!ids.insert(a.id).second)
      throw ParseError(where + ": duplicate node id '" + a.id + "'");
    g.artifacts.push_back(std::move(a));
  }
  for (const auto& jp : jutil::getArray(j, "processes", where)) {
    jutil::checkKeys(jp, {"id", "name", "uses", "generates"}, where + ".processes");
    Process p;
    p.id = jutil::getString(jp, "id", where + ".processes");
    p.name = jutil::getString(jp, "name", where + ".processes");
    if (!ids.insert(p.id).second)
      throw ParseError(where + ": duplicate node id '" + p.id + "'");
    for (const auto& ju : jutil::getArray(jp, "uses", where + ".processes")) {
      jutil::checkKeys(ju, {"artifact", "port"}, where + ".uses");
      UsedEdge e;
      e.process = p.id;
      e.artifact = jutil::getString(ju, "artifact", where + ".uses");
      e.port = jutil::getInt(ju, "port", where + ".uses");
      g.used.push_back(std::move(e));
    }
    GenEdge ge;
    ge.artifact = jutil::getString(jp, "generates", where + ".processes");
    ge.process = p.id;
    g.generated.push_back(std::move(ge));
    g.processes.push_back(std::move(p));
  }
  g.result = jutil::getString(j, "result", where);
  bool found = false;
  for (const auto& a : g.artifacts)
    if (a.id == g.result) { found = true; break; }
  if (!found) throw ParseError(where + ": no result node '" + g.result + "'");
  for (const auto& ji : jutil::getArray(j, "inputs", where)) {
    if (!ji.is_string()) throw ParseError(where + ": inputs must be artifact ids");
    g.inputs.push_back(ji.get<std::string>());
  }
  return g;
}

}  // namespace

ProvGraph readGraph(const std::string& text) {
  return graphFromJson(jutil::parse(text, "graph"));
}

std::string writeGraph(const ProvGraph& g) {
  nlohmann::json j;
  j["domain"] = g.domain.toJson();

  std::vector<const Artifact*> arts;
  for (const auto& a : g.artifacts) arts.push_back(&a);
  std::sort(arts.begin(), arts.end(),
            [](const Artifact* l, const Artifact* r) { return l->id < r->id; });
  j["artifacts"] = nlohmann::json::array();
  for (const Artifact* a : arts)
    j["artifacts"].push_back({{"id", a->id}, {"value", a->value}, {"input", a->input}});

  std::vector<const Process*> procs;
  for (const auto& p : g.processes) procs.push_back(&p);
  std::sort(procs.begin(), procs.end(),
            [](const Process* l, const Process* r) { return l->id < r->id; });
  j["processes"] = nlohmann::json::array();
  for (const Process* p : procs) {
    std::vector<std::pair<int, std::string>> uses;
    for (const auto& e : g.used)
      if (e.process == p->id) uses.emplace_back(e.port, e.artifact);
    std::sort(uses.begin(), uses.end());
    std::string gen;
    int genCount = 0;
    for (const auto& e : g.generated)
      if (e.process == p->id) { gen = e.artifact; ++genCount; }
    if (genCount != 1)
      throw Error("cannot serialize process '" + p->id +
                  "': it generates " + std::to_string(genCount) + " artifacts");
    nlohmann::json jp;
    jp["id"] = p->id;
    jp["name"] = p->name;
    jp["uses"] = nlohmann::json::array();
    for (auto& [port, art] : uses)
      jp["uses"].push_back({{"artifact", art}, {"port", port}});
    jp["generates"] = gen;
    j["processes"].push_back(std::move(jp));
  }

  j["result"] = g.result;
  j["inputs"] = g.inputs;
  return j.dump(2) + "\n";
}

Interpretation readInterpretation(const std::string& text) {
  const std::string where = "interpretation";
  nlohmann::json j = jutil::parse(text, where);
  jutil::checkKeys(j, {"ops"}, where);
  Interpretation interp;
  for (const auto& jo : jutil::getArray(j, "ops", where)) {
    jutil::checkKeys(jo, {"name", "arity", "fn"}, where + ".ops");
    OpSpec op;
    op.name = jutil::getString(jo, "name", where + ".ops");
    op.arity = jutil::getInt(jo, "arity", where + ".ops");
    op.fn = FunctionSpec::fromJson(jutil::getField(jo, "fn", where + ".ops"),
                                   where + ".ops('" + op.name + "')");
    interp.ops.push_back(std::move(op));
  }
  return interp;
}

std::string writeInterpretation(const Interpretation& interp) {
  nlohmann::json j;
  std::vector<const OpSpec*> ops;
  for (const auto& op : interp.ops) ops.push_back(&op);
  std::sort(ops.begin(), ops.end(),
            [](const OpSpec* l, const OpSpec* r) { return l->name < r->name; });
  j["ops"] = nlohmann::json::array();
  for (const OpSpec* op : ops)
    j["ops"].push_back({{"name", op->name}, {"arity", op->arity}, {"fn", op->fn.toJson()}});
  return j.dump(2) + "\n";
}

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

ProvGraph readGraphFile(const std::string& path) { return readGraph(slurp(path)); }

Interpretation readInterpretationFile(const std::string& path) {
  return readInterpretation(slurp(path));
}

}  // namespace provcausal::provgraph
