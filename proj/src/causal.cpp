#include "provcausal/causal.hpp"

#include "provcausal/json_util.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace provcausal::causal {

CompiledModel::CompiledModel(const CausalModel& m) : model_(m) {
  nu_ = static_cast<int>(m.exogenous.size());
  nv_ = static_cast<int>(m.endogenous.size());
  names_.reserve(static_cast<size_t>(nu_ + nv_));
  for (const auto& u : m.exogenous) names_.push_back(u);
  for (const auto& eq : m.endogenous) names_.push_back(eq.name);
  for (int i = 0; i < nu_ + nv_; ++i)
    if (!index_.emplace(names_[static_cast<size_t>(i)], i).second)
      throw Error("duplicate variable name '" + names_[static_cast<size_t>(i)] + "'");

  parents_.resize(static_cast<size_t>(nv_));
  fns_.reserve(static_cast<size_t>(nv_));
  for (int i = 0; i < nv_; ++i) {
    const Equation& eq = m.endogenous[static_cast<size_t>(i)];
    for (const auto& p : eq.parents) {
      auto it = index_.find(p);
      if (it == index_.end())
        throw Error("equation '" + eq.name + "' references unknown parent '" + p + "'");
      parents_[static_cast<size_t>(i)].push_back(it->second);
    }
    fns_.push_back(CompiledFn::compile(eq.fn, m.domain,
                                       static_cast<int>(eq.parents.size()),
                                       "equation '" + eq.name + "'"));
  }

  // topological order over endogenous variables; cycles are an error
  std::vector<int> indeg(static_cast<size_t>(nv_), 0);
  std::vector<std::vector<int>> out(static_cast<size_t>(nv_));
  for (int i = 0; i < nv_; ++i)
    for (int p : parents_[static_cast<size_t>(i)])
      if (p >= nu_) {
        out[static_cast<size_t>(p - nu_)].push_back(i);
        ++indeg[static_cast<size_t>(i)];
      }
  std::vector<int> ready;
  for (int i = 0; i < nv_; ++i)
    if (indeg[static_cast<size_t>(i)] == 0) ready.push_back(i);
  while (!ready.empty()) {
    auto pick = std::min_element(ready.begin(), ready.end());
    int v = *pick;
    ready.erase(pick);
    topo_.push_back(v);
    for (int w : out[static_cast<size_t>(v)])
      if (--indeg[static_cast<size_t>(w)] == 0) ready.push_back(w);
  }
  if (static_cast<int>(topo_.size()) != nv_)
    throw Error("model equations are cyclic");
}

int CompiledModel::varIndex(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw Error("unknown variable '" + name + "'");
  return it->second;
}

int CompiledModel::endoIndex(const std::string& name) const {
  int idx = varIndex(name);
  if (idx < nu_) throw Error("variable '" + name + "' is exogenous");
  return idx - nu_;
}

std::vector<Value> CompiledModel::solve(std::span<const Value> context,
                                        std::span<const int> forced) const {
  if (static_cast<int>(context.size()) != nu_)
    throw Error("context needs " + std::to_string(nu_) + " exogenous values");
  std::vector<Value> vals(static_cast<size_t>(nu_ + nv_), 0);
  for (int i = 0; i < nu_; ++i) vals[static_cast<size_t>(i)] = context[static_cast<size_t>(i)];
  std::vector<Value> argbuf;
  for (int i : topo_) {
    if (!forced.empty() && forced[static_cast<size_t>(i)] >= 0) {
      vals[static_cast<size_t>(nu_ + i)] = static_cast<Value>(forced[static_cast<size_t>(i)]);
      continue;
    }
    argbuf.clear();
    for (int p : parents_[static_cast<size_t>(i)]) argbuf.push_back(vals[static_cast<size_t>(p)]);
    vals[static_cast<size_t>(nu_ + i)] = fns_[static_cast<size_t>(i)].apply(argbuf);
  }
  return vals;
}

std::vector<int> CompiledModel::endoAncestors(int i) const {
  std::vector<bool> seen(static_cast<size_t>(nv_), false);
  std::vector<int> stack{i};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int p : parents_[static_cast<size_t>(v)])
      if (p >= nu_ && !seen[static_cast<size_t>(p - nu_)]) {
        seen[static_cast<size_t>(p - nu_)] = true;
        stack.push_back(p - nu_);
      }
  }
  std::vector<int> anc;
  for (int v = 0; v < nv_; ++v)
    if (seen[static_cast<size_t>(v)]) anc.push_back(v);
  return anc;
}

Context CompiledModel::parseContext(const std::map<std::string, std::string>& named) const {
  Context ctx;
  for (const auto& [k, v] : named) {
    int idx = varIndex(k);
    if (idx >= nu_) throw Error("context variable '" + k + "' is not exogenous");
    ctx[k] = domain().requireValue(v, "context '" + k + "'");
  }
  return ctx;
}

CausalModel intervene(const CausalModel& m, const Intervention& setting) {
  std::set<std::string> exo(m.exogenous.begin(), m.exogenous.end());
  std::set<std::string> endo;
  for (const auto& eq : m.endogenous) endo.insert(eq.name);
  for (const auto& [name, v] : setting) {
    if (exo.count(name)) throw Error("cannot intervene on exogenous variable '" + name + "'");
    if (!endo.count(name)) throw Error("cannot intervene on unknown variable '" + name + "'");
    if (static_cast<int>(v) >= m.domain.size())
      throw Error("intervention value out of domain range for '" + name + "'");
  }
  CausalModel r = m;
  for (auto& eq : r.endogenous) {
    auto it = setting.find(eq.name);
    if (it != setting.end()) {
      eq.parents.clear();
      eq.fn = FunctionSpec::constant(m.domain.valueName(it->second));
    }
  }
  return r;
}

Valuation solve(const CausalModel& m, const Context& u) {
  CompiledModel cm(m);
  std::vector<Value> ctx(static_cast<size_t>(cm.exoCount()), 0);
  std::set<std::string> given;
  for (const auto& [k, v] : u) given.insert(k);
  for (int i = 0; i < cm.exoCount(); ++i) {
    const std::string& name = cm.varName(i);
    auto it = u.find(name);
    if (it == u.end()) throw Error("context is missing exogenous variable '" + name + "'");
    ctx[static_cast<size_t>(i)] = it->second;
    given.erase(name);
  }
  if (!given.empty())
    throw Error("context names unknown variable '" + *given.begin() + "'");
  std::vector<Value> vals = cm.solve(ctx);
  Valuation out;
  for (int i = 0; i < cm.exoCount() + cm.endoCount(); ++i)
    out[cm.varName(i)] = vals[static_cast<size_t>(i)];
  return out;
}

ConsistencyReport isConsistent(const CausalSituation& s) {
  CompiledModel cm(s.model);
  ConsistencyReport rep;
  auto valueOf = [&](const std::string& name) -> Value {
    auto it = s.values.find(name);
    if (it == s.values.end())
      throw Error("situation valuation is missing variable '" + name + "'");
    return it->second;
  };
  std::vector<Value> argbuf;
  for (int i = 0; i < cm.endoCount(); ++i) {
    argbuf.clear();
    for (int p : cm.parentsOf(i)) argbuf.push_back(valueOf(cm.varName(p)));
    if (cm.fnOf(i).apply(argbuf) != valueOf(cm.endoName(i))) {
      rep.consistent = false;
      rep.mismatched.push_back(cm.endoName(i));
    }
  }
  return rep;
}

Valuation CausalFunction::apply(const Intervention& tau, const Context& u) const {
  std::vector<int> forced(static_cast<size_t>(compiled_.endoCount()), -1);
  for (const auto& [name, v] : tau) {
    int idx = compiled_.endoIndex(name);
    forced[static_cast<size_t>(idx)] = v;
  }
  std::vector<Value> ctx(static_cast<size_t>(compiled_.exoCount()), 0);
  std::set<std::string> given;
  for (const auto& [k, v] : u) given.insert(k);
  for (int i = 0; i < compiled_.exoCount(); ++i) {
    auto it = u.find(compiled_.varName(i));
    if (it == u.end())
      throw Error("context is missing exogenous variable '" + compiled_.varName(i) + "'");
    ctx[static_cast<size_t>(i)] = it->second;
    given.erase(compiled_.varName(i));
  }
  if (!given.empty())
    throw Error("context names unknown variable '" + *given.begin() + "'");
  std::vector<Value> vals = compiled_.solve(ctx, forced);
  Valuation out;
  for (int i = 0; i < compiled_.exoCount() + compiled_.endoCount(); ++i)
    out[compiled_.varName(i)] = vals[static_cast<size_t>(i)];
  return out;
}

std::vector<std::string> lint(const CausalModel& m) {
  CompiledModel cm(m);
  std::vector<std::string> warnings;
  for (int i = 0; i < cm.endoCount(); ++i) {
    const auto& eq = m.endogenous[static_cast<size_t>(i)];
    for (size_t a = 0; a < eq.parents.size(); ++a)
      if (cm.fnOf(i).constantInArg(static_cast<int>(a), m.domain))
        warnings.push_back("equation '" + eq.name + "' never depends on declared parent '" +
                           eq.parents[a] + "'");
  }
  return warnings;
}

bool sameModel(const CausalModel& a, const CausalModel& b) {
  if (a.domain != b.domain) return false;
  if (a.context != b.context) return false;
  auto sortedNames = [](const std::vector<std::string>& v) {
    auto s = v;
    std::sort(s.begin(), s.end());
    return s;
  };
  if (sortedNames(a.exogenous) != sortedNames(b.exogenous)) return false;
  if (a.endogenous.size() != b.endogenous.size()) return false;
  std::map<std::string, const Equation*> eqB;
  for (const auto& eq : b.endogenous) eqB[eq.name] = &eq;
  for (const auto& ea : a.endogenous) {
    auto it = eqB.find(ea.name);
    if (it == eqB.end()) return false;
    const Equation& eb = *it->second;
    if (ea.parents != eb.parents) return false;
    CompiledFn fa = CompiledFn::compile(ea.fn, a.domain,
                                        static_cast<int>(ea.parents.size()), ea.name);
    CompiledFn fb = CompiledFn::compile(eb.fn, b.domain,
                                        static_cast<int>(eb.parents.size()), eb.name);
    if (!(fa == fb)) return false;
  }
  return true;
}

CausalModel readModel(const std::string& text) {
  const std::string where = "model";
  nlohmann::json j = jutil::parse(text, where);
  jutil::checkKeys(j, {"domain", "exogenous", "endogenous", "context"}, where);
  CausalModel m;
  m.domain = Domain::fromJson(jutil::getField(j, "domain", where), where + ".domain");
  for (const auto& ju : jutil::getArray(j, "exogenous", where)) {
    if (!ju.is_string()) throw ParseError(where + ": exogenous entries must be names");
    m.exogenous.push_back(ju.get<std::string>());
  }
  for (const auto& je : jutil::getArray(j, "endogenous", where)) {
    jutil::checkKeys(je, {"id", "parents", "fn"}, where + ".endogenous");
    Equation eq;
    eq.name = jutil::getString(je, "id", where + ".endogenous");
    for (const auto& jp : jutil::getArray(je, "parents", where + ".endogenous")) {
      if (!jp.is_string()) throw ParseError(where + ": parents must be names");
      eq.parents.push_back(jp.get<std::string>());
    }
    eq.fn = FunctionSpec::fromJson(jutil::getField(je, "fn", where + ".endogenous"),
                                   where + ".endogenous('" + eq.name + "')");
    m.endogenous.push_back(std::move(eq));
  }
  if (j.contains("context")) {
    const auto& jc = jutil::getField(j, "context", where);
    jutil::requireObject(jc, where + ".context");
    for (auto it = jc.begin(); it != jc.end(); ++it) {
      if (!it.value().is_string())
        throw ParseError(where + ".context: values must be value strings");
      m.context[it.key()] = it.value().get<std::string>();
    }
  }
  CompiledModel check(m);  // surfaces unknown parents, cycles, bad tables
  return m;
}

std::string writeModel(const CausalModel& m) {
  nlohmann::json j;
  j["domain"] = m.domain.toJson();
  j["exogenous"] = m.exogenous;
  j["endogenous"] = nlohmann::json::array();
  for (const auto& eq : m.endogenous)
    j["endogenous"].push_back(
        {{"id", eq.name}, {"parents", eq.parents}, {"fn", eq.fn.toJson()}});
  if (!m.context.empty()) {
    nlohmann::json jc = nlohmann::json::object();
    for (const auto& [k, v] : m.context) jc[k] = v;
    j["context"] = jc;
  }
  return j.dump(2) + "\n";
}

CausalModel readModelFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return readModel(ss.str());
}

}  // namespace provcausal::causal
