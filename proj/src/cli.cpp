#include "provcausal/cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "provcausal/approx.hpp"
#include "provcausal/causal.hpp"
#include "provcausal/domain.hpp"
#include "provcausal/hpcause.hpp"
#include "provcausal/json_util.hpp"
#include "provcausal/opmrules.hpp"
#include "provcausal/provgraph.hpp"
#include "provcausal/slp.hpp"
#include "provcausal/translate.hpp"

namespace provcausal::cli {
namespace {

using nlohmann::json;

struct Opts {
  std::string path;
  std::string interp;
  std::string inputs;
  std::string set;
  std::string candidate;
  std::string effect;
  std::string semantics = "trace";
  std::string left, right;
  std::string level;
  std::string mode = "causal";
  std::string domain = "bool";
  std::string format;
  std::string faults = "off";
  int maxCauseSize = 3;
  long long budget = 1 << 20;
  long long tauBudget = -1;
  long long seed = 0;
  bool strict = false;
  bool dump = false;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::pair<std::string, std::string>> parseKvList(const std::string& text,
                                                             const std::string& flag) {
  std::vector<std::pair<std::string, std::string>> out;
  if (text.empty()) return out;
  size_t pos = 0;
  for (;;) {
    size_t comma = text.find(',', pos);
    std::string item =
        comma == std::string::npos ? text.substr(pos) : text.substr(pos, comma - pos);
    size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error(flag + " entries must look like name=value, got '" + item + "'");
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::pair<std::string, std::string> parseOneKv(const std::string& text,
                                               const std::string& flag) {
  auto kvs = parseKvList(text, flag);
  if (kvs.size() != 1) throw Error(flag + " takes a single name=value");
  return kvs[0];
}

Domain domainFromFlag(const std::string& spec) {
  if (spec == "bool") return Domain::boolean();
  if (spec.rfind("mod:", 0) == 0) {
    int m = 0;
    try {
      size_t used = 0;
      m = std::stoi(spec.substr(4), &used);
      if (used != spec.size() - 4) throw Error("");
    } catch (...) {
      throw Error("--domain mod:<m> needs an integer modulus, got '" + spec + "'");
    }
    return Domain::mod(m);
  }
  if (spec.rfind("enum:", 0) == 0) {
    std::vector<std::string> symbols;
    std::string rest = spec.substr(5);
    size_t pos = 0;
    for (;;) {
      size_t comma = rest.find(',', pos);
      symbols.push_back(comma == std::string::npos ? rest.substr(pos)
                                                   : rest.substr(pos, comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return Domain::enumeration(symbols);
  }
  throw Error("--domain must be bool, mod:<m> or enum:<v1,v2,...>, got '" + spec + "'");
}

// build the ordered input tuple a graph or program expects from name=value pairs
std::vector<Value> tupleFor(const std::vector<std::string>& names, const std::string& kvText,
                            const Domain& d, const std::string& flag) {
  std::map<std::string, std::string> given;
  for (const auto& [k, v] : parseKvList(kvText, flag)) {
    if (!given.emplace(k, v).second) throw Error(flag + " names '" + k + "' twice");
  }
  std::vector<Value> tuple;
  for (const auto& name : names) {
    auto it = given.find(name);
    if (it == given.end()) throw Error(flag + " is missing input '" + name + "'");
    tuple.push_back(d.requireValue(it->second, flag + " " + name));
    given.erase(it);
  }
  if (!given.empty())
    throw Error(flag + " names '" + given.begin()->first + "', not an input");
  return tuple;
}

json valuePairs(const Domain& d, const std::vector<hpcause::VarVal>& vals) {
  json j = json::object();
  for (const auto& [name, v] : vals) j[name] = d.valueName(v);
  return j;
}

json witnessJson(const Domain& d, const hpcause::Witness& w) {
  json j;
  j["W"] = w.w;
  j["xPrime"] = valuePairs(d, w.xPrime);
  j["wPrime"] = valuePairs(d, w.wPrime);
  return j;
}

json inputObject(const std::vector<std::string>& names, const Domain& d,
                 const std::vector<Value>& tuple) {
  json j = json::object();
  for (size_t i = 0; i < names.size(); ++i) j[names[i]] = d.valueName(tuple[i]);
  return j;
}

// model files as written by `to-causal` wrap the model next to the solved
// values; accept both shapes, and lift the values into a default context
causal::CausalModel loadModel(const std::string& path) {
  std::string text = slurp(path);
  json j = jutil::parse(text, path);
  if (j.is_object() && j.contains("model")) {
    causal::CausalModel m = causal::readModel(j["model"].dump());
    if (m.context.empty() && j.contains("values") && j["values"].is_object()) {
      for (const auto& name : m.exogenous) {
        auto it = j["values"].find(name);
        if (it != j["values"].end() && it->is_string())
          m.context[name] = it->get<std::string>();
      }
    }
    return m;
  }
  return causal::readModel(text);
}

causal::Context contextFor(const causal::CausalModel& m, const std::string& inputsFlag) {
  causal::Context ctx;
  if (!inputsFlag.empty()) {
    for (const auto& [k, v] : parseKvList(inputsFlag, "--inputs"))
      ctx[k] = m.domain.requireValue(v, "--inputs " + k);
    return ctx;
  }
  if (!m.context.empty()) {
    for (const auto& [k, v] : m.context)
      ctx[k] = m.domain.requireValue(v, "context " + k);
    return ctx;
  }
  if (!m.exogenous.empty())
    throw Error("model carries no context; pass --inputs name=value,...");
  return ctx;
}

int cmdValidate(const Opts& o, std::ostream& out) {
  provgraph::ProvGraph g = provgraph::readGraphFile(o.path);
  provgraph::ValidationReport rep;
  if (!o.interp.empty()) {
    provgraph::Interpretation interp = provgraph::readInterpretationFile(o.interp);
    rep = provgraph::validate(g, interp);
  } else {
    rep = provgraph::validate(g);
  }
  json j;
  j["valid"] = rep.ok();
  j["violations"] = json::array();
  for (const auto& v : rep.violations)
    j["violations"].push_back({{"code", v.code}, {"message", v.message}});
  out << j.dump(2) << "\n";
  return rep.ok() ? 0 : 1;
}

int cmdEval(const Opts& o, std::ostream& out) {
  provgraph::ProvGraph g = provgraph::readGraphFile(o.path);
  provgraph::Interpretation interp = provgraph::readInterpretationFile(o.interp);
  Value result = 0;
  if (!o.inputs.empty()) {
    provgraph::Evaluator ev(g, interp);
    result = ev.resultAt(tupleFor(g.inputs, o.inputs, g.domain, "--inputs"));
  } else {
    result = provgraph::evaluateAtLabels(g, interp).result;
  }
  out << g.result << "=" << g.domain.valueName(result) << "\n";
  return 0;
}

int cmdToCausal(const Opts& o, std::ostream& out) {
  provgraph::ProvGraph g = provgraph::readGraphFile(o.path);
  provgraph::Interpretation interp = provgraph::readInterpretationFile(o.interp);
  translate::Options topts;
  topts.faultTerms = o.faults == "on";
  translate::Situation s = translate::toCausal(g, interp, topts);
  json j;
  j["model"] = json::parse(causal::writeModel(s.model));
  json values = json::object();
  for (const auto& [name, v] : s.values) values[name] = s.model.domain.valueName(v);
  j["values"] = values;
  j["consistent"] = s.consistent;
  if (!s.consistent) j["inconsistentAt"] = s.inconsistentAt;
  out << j.dump(2) << "\n";
  return 0;
}

int cmdIntervene(const Opts& o, std::ostream& out) {
  causal::CausalModel m = loadModel(o.path);
  causal::Intervention setting;
  for (const auto& [k, v] : parseKvList(o.set, "--set"))
    setting[k] = m.domain.requireValue(v, "--set " + k);
  if (setting.empty()) throw Error("--set needs at least one name=value");
  out << causal::writeModel(causal::intervene(m, setting));
  return 0;
}

int cmdCause(const Opts& o, std::ostream& out) {
  causal::CausalModel m = loadModel(o.path);
  auto [effName, effVal] = parseOneKv(o.effect, "--effect");
  hpcause::VarVal target{effName, m.domain.requireValue(effVal, "--effect")};
  std::vector<hpcause::VarVal> candidate;
  for (const auto& [k, v] : parseKvList(o.candidate, "--candidate"))
    candidate.emplace_back(k, m.domain.requireValue(v, "--candidate " + k));
  if (candidate.empty()) throw Error("--candidate needs at least one name=value");
  auto sit = hpcause::Situation::fromContext(m, contextFor(m, o.inputs));
  hpcause::Verdict v = hpcause::isActualCause(sit, candidate, target);
  json j;
  j["weak"] = v.weak;
  j["actual"] = v.actual;
  if (v.witness) j["witness"] = witnessJson(m.domain, *v.witness);
  out << j.dump(2) << "\n";
  return v.actual ? 0 : 1;
}

int cmdCauses(const Opts& o, std::ostream& out) {
  causal::CausalModel m = loadModel(o.path);
  auto [effName, effVal] = parseOneKv(o.effect, "--effect");
  hpcause::VarVal target{effName, m.domain.requireValue(effVal, "--effect")};
  auto sit = hpcause::Situation::fromContext(m, contextFor(m, o.inputs));
  auto causes = hpcause::enumerateActualCauses(sit, target, o.maxCauseSize);
  json j;
  j["effect"] = {{effName, m.domain.valueName(target.second)}};
  j["maxCauseSize"] = o.maxCauseSize;
  j["causes"] = json::array();
  for (const auto& c : causes)
    j["causes"].push_back({{"members", valuePairs(m.domain, c.members)},
                           {"witness", witnessJson(m.domain, c.witness)}});
  out << j.dump(2) << "\n";
  return 0;
}

void edgeLines(std::vector<std::string>& lines, const std::string& relation,
               const std::vector<opmrules::Edge>& edges) {
  for (const auto& e : edges) lines.push_back(relation + "\t" + e.from + "\t" + e.to);
}

json edgeArray(const std::vector<opmrules::Edge>& edges) {
  json j = json::array();
  for (const auto& e : edges) j.push_back({{"from", e.from}, {"to", e.to}});
  return j;
}

int cmdInfer(const Opts& o, std::ostream& out) {
  provgraph::ProvGraph g = provgraph::readGraphFile(o.path);
  opmrules::EdgeBase base = opmrules::infer(g);
  if (o.format == "json") {
    json j;
    j["used"] = edgeArray(base.used);
    j["wasGeneratedBy"] = edgeArray(base.wasGeneratedBy);
    j["wasDerivedFrom"] = edgeArray(base.wasDerivedFrom);
    j["wasTriggeredBy"] = edgeArray(base.wasTriggeredBy);
    j["wasDerivedFrom+"] = edgeArray(base.wasDerivedFromPlus);
    j["wasTriggeredBy+"] = edgeArray(base.wasTriggeredByPlus);
    out << j.dump(2) << "\n";
    return 0;
  }
  std::vector<std::string> lines;
  edgeLines(lines, "used", base.used);
  edgeLines(lines, "wasGeneratedBy", base.wasGeneratedBy);
  edgeLines(lines, "wasDerivedFrom", base.wasDerivedFrom);
  edgeLines(lines, "wasTriggeredBy", base.wasTriggeredBy);
  edgeLines(lines, "wasDerivedFrom+", base.wasDerivedFromPlus);
  edgeLines(lines, "wasTriggeredBy+", base.wasTriggeredByPlus);
  std::sort(lines.begin(), lines.end());
  for (const auto& line : lines) out << line << "\n";
  return 0;
}

int cmdAudit(const Opts& o, std::ostream& out) {
  provgraph::ProvGraph g = provgraph::readGraphFile(o.path);
  provgraph::Interpretation interp = provgraph::readInterpretationFile(o.interp);
  opmrules::AuditOptions ao;
  ao.maxCauseSize = o.maxCauseSize;
  ao.translate.faultTerms = o.faults == "on";
  opmrules::AuditReport rep = opmrules::audit(g, interp, ao);
  for (const auto& row : rep.rows) {
    json j;
    j["relation"] = row.relation;
    j["from"] = row.from;
    j["to"] = row.to;
    j["status"] = row.sound ? "sound" : "spurious";
    if (row.sound) {
      json w = witnessJson(g.domain, row.witness);
      w["cause"] = valuePairs(g.domain, row.cause);
      j["witness"] = w;
    }
    out << j.dump() << "\n";
  }
  out << "spurious=" << rep.spurious << " sound=" << rep.sound << "\n";
  return o.strict && rep.spurious > 0 ? 1 : 0;
}

int cmdConjecture(const Opts& o, std::ostream& out) {
  provgraph::ProvGraph g = provgraph::readGraphFile(o.path);
  provgraph::Interpretation interp = provgraph::readInterpretationFile(o.interp);
  opmrules::AuditOptions ao;
  ao.maxCauseSize = o.maxCauseSize;
  ao.translate.faultTerms = o.faults == "on";
  opmrules::ConjectureReport rep = opmrules::checkConjecture(g, interp, ao);
  json j;
  j["holds"] = rep.ok();
  j["maxCauseSize"] = rep.maxCauseSize;
  j["derivedNotCausal"] = edgeArray(rep.derivedNotCausal);
  j["causalNotDerived"] = edgeArray(rep.causalNotDerived);
  out << j.dump(2) << "\n";
  return rep.ok() ? 0 : 1;
}

int cmdTrace(const Opts& o, std::ostream& out) {
  slp::Program p = slp::parseFile(o.path);
  Domain d = domainFromFlag(o.domain);
  auto u = tupleFor(p.inputs, o.inputs, d, "--inputs");
  slp::Emitted em = slp::emit(p, d, u, slp::semanticsFromName(o.semantics));
  json j;
  j["graph"] = json::parse(provgraph::writeGraph(em.graph));
  j["interpretation"] = json::parse(provgraph::writeInterpretation(em.interp));
  out << j.dump(2) << "\n";
  return 0;
}

approx::Options approxOptions(const Opts& o) {
  approx::Options ao;
  ao.inputBudget = o.budget;
  ao.tauBudget = o.tauBudget >= 0 ? o.tauBudget : o.budget;
  return ao;
}

int cmdApprox(const Opts& o, std::ostream& out) {
  slp::Program p = slp::parseFile(o.path);
  Domain d = domainFromFlag(o.domain);
  auto kind = slp::semanticsFromName(o.semantics);
  auto level = approx::levelFromName(o.level);
  auto mode = approx::modeFromName(o.mode);
  approx::Verdict v = mode == approx::Mode::Functional
                          ? approx::checkFunctional(p, d, kind, level, approxOptions(o))
                          : approx::checkCausal(p, d, kind, level, approxOptions(o));
  json j;
  j["pass"] = v.pass;
  j["mode"] = o.mode;
  j["level"] = o.level;
  j["semantics"] = o.semantics;
  j["checked"] = v.checked;
  j["skippedTau"] = v.skippedTau;
  if (v.counterexample) {
    const auto& cx = *v.counterexample;
    json c;
    c["u"] = inputObject(p.inputs, d, cx.u);
    c["uPrime"] = inputObject(p.inputs, d, cx.uPrime);
    if (cx.tau) {
      json t = json::object();
      for (const auto& [name, val] : *cx.tau) t[name] = d.valueName(val);
      c["tau"] = t;
    }
    c["variable"] = cx.variable;
    c["expected"] = cx.expected;
    c["got"] = cx.got;
    if (!cx.note.empty()) c["note"] = cx.note;
    j["counterexample"] = c;
  }
  out << j.dump(2) << "\n";
  return v.pass ? 0 : 1;
}

json tupleNames(const Domain& d, const std::vector<Value>& t) {
  json j = json::array();
  for (Value v : t) j.push_back(d.valueName(v));
  return j;
}

int cmdPower(const Opts& o, std::ostream& out) {
  slp::Program p = slp::parseFile(o.path);
  Domain d = domainFromFlag(o.domain);
  auto rel = approx::power(p, d, slp::semanticsFromName(o.semantics),
                           approx::modeFromName(o.mode), approxOptions(o));
  json j;
  j["semantics"] = o.semantics;
  j["mode"] = o.mode;
  j["inputs"] = p.inputs;
  j["reflexive"] = rel.reflexive();
  j["total"] = rel.total();
  j["pairs"] = rel.pairs().size();
  if (o.dump) {
    json arr = json::array();
    for (const auto& [u, uPrime] : rel.pairs())
      arr.push_back({tupleNames(d, u), tupleNames(d, uPrime)});
    j["relation"] = arr;
  }
  out << j.dump(2) << "\n";
  return 0;
}

int cmdCompare(const Opts& o, std::ostream& out) {
  slp::Program p = slp::parseFile(o.path);
  Domain d = domainFromFlag(o.domain);
  auto mode = approx::modeFromName(o.mode);
  auto a = approx::power(p, d, slp::semanticsFromName(o.left), mode, approxOptions(o));
  auto b = approx::power(p, d, slp::semanticsFromName(o.right), mode, approxOptions(o));
  std::string ordering;
  switch (approx::compare(a, b)) {
    case approx::Ordering::Less: ordering = "less"; break;
    case approx::Ordering::Greater: ordering = "greater"; break;
    case approx::Ordering::Equal: ordering = "equal"; break;
    case approx::Ordering::Incomparable: ordering = "incomparable"; break;
  }
  json j;
  j["left"] = o.left;
  j["right"] = o.right;
  j["mode"] = o.mode;
  j["ordering"] = ordering;
  out << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Opts o;
  CLI::App app{"provenance graphs with causal-model semantics", "provcausal"};
  app.require_subcommand(1);
  app.add_option("--seed", o.seed, "seed for randomized exploration (reserved)");

  auto* sValidate = app.add_subcommand("validate", "check graph well-formedness");
  sValidate->add_option("graph", o.path, "graph file")->required();
  sValidate->add_option("--interp", o.interp, "interpretation file");

  auto* sEval = app.add_subcommand("eval", "evaluate a graph at given inputs");
  sEval->add_option("graph", o.path, "graph file")->required();
  sEval->add_option("--interp", o.interp, "interpretation file")->required();
  sEval->add_option("--inputs", o.inputs, "input values name=value,... (default: labels)");

  auto* sToCausal = app.add_subcommand("to-causal", "read a labeled graph as a causal model");
  sToCausal->add_option("graph", o.path, "graph file")->required();
  sToCausal->add_option("--interp", o.interp, "interpretation file")->required();
  sToCausal->add_option("--faults", o.faults, "add per-process fault terms (on|off)")
      ->check(CLI::IsMember({"on", "off"}));

  auto* sIntervene = app.add_subcommand("intervene", "pin endogenous variables to constants");
  sIntervene->add_option("model", o.path, "model file")->required();
  sIntervene->add_option("--set", o.set, "interventions name=value,...")->required();

  auto* sCause = app.add_subcommand("cause", "test a candidate actual cause");
  sCause->add_option("model", o.path, "model file")->required();
  sCause->add_option("--effect", o.effect, "effect name=value")->required();
  sCause->add_option("--candidate", o.candidate, "candidate name=value,...")->required();
  sCause->add_option("--inputs", o.inputs, "exogenous context name=value,...");

  auto* sCauses = app.add_subcommand("causes", "enumerate actual causes of an effect");
  sCauses->add_option("model", o.path, "model file")->required();
  sCauses->add_option("--effect", o.effect, "effect name=value")->required();
  sCauses->add_option("--max-cause-size", o.maxCauseSize, "largest cause set considered");
  sCauses->add_option("--inputs", o.inputs, "exogenous context name=value,...");

  auto* sInfer = app.add_subcommand("infer", "derive provenance relations and closures");
  sInfer->add_option("graph", o.path, "graph file")->required();
  sInfer->add_option("--format", o.format, "output format (tsv|json)")
      ->check(CLI::IsMember({"tsv", "json"}));

  auto* sAudit = app.add_subcommand("audit", "classify derived edges as sound or spurious");
  sAudit->add_option("graph", o.path, "graph file")->required();
  sAudit->add_option("--interp", o.interp, "interpretation file")->required();
  sAudit->add_option("--max-cause-size", o.maxCauseSize, "largest cause set considered");
  sAudit->add_option("--faults", o.faults, "add per-process fault terms (on|off)")
      ->check(CLI::IsMember({"on", "off"}));
  sAudit->add_flag("--strict", o.strict, "exit 1 when any edge is spurious");

  auto* sConjecture =
      app.add_subcommand("conjecture", "compare the derivation closure against causes");
  sConjecture->add_option("graph", o.path, "graph file")->required();
  sConjecture->add_option("--interp", o.interp, "interpretation file")->required();
  sConjecture->add_option("--max-cause-size", o.maxCauseSize, "largest cause set considered");
  sConjecture->add_option("--faults", o.faults, "add per-process fault terms (on|off)")
      ->check(CLI::IsMember({"on", "off"}));

  auto* sTrace = app.add_subcommand("trace", "emit the provenance graph of one run");
  sTrace->add_option("program", o.path, "program file (.slp)")->required();
  sTrace->add_option("--inputs", o.inputs, "input values name=value,...")->required();
  sTrace->add_option("--semantics", o.semantics, "trivial|trace|static (default trace)");
  sTrace->add_option("--domain", o.domain, "bool | mod:<m> | enum:<v1,v2,...>");

  auto* sApprox = app.add_subcommand("approx", "check an approximation level exhaustively");
  sApprox->add_option("program", o.path, "program file (.slp)")->required();
  sApprox->add_option("--semantics", o.semantics, "trivial|trace|static")->required();
  sApprox->add_option("--level", o.level, "pointwise|local|global")->required();
  sApprox->add_option("--mode", o.mode, "functional|causal");
  sApprox->add_option("--domain", o.domain, "bool | mod:<m> | enum:<v1,v2,...>");
  sApprox->add_option("--budget", o.budget, "input enumeration ceiling");
  sApprox->add_option("--tau-budget", o.tauBudget, "intervention enumeration ceiling");

  auto* sPower = app.add_subcommand("power", "compute the predictive power relation");
  sPower->add_option("program", o.path, "program file (.slp)")->required();
  sPower->add_option("--semantics", o.semantics, "trivial|trace|static")->required();
  sPower->add_option("--mode", o.mode, "functional|causal");
  sPower->add_option("--domain", o.domain, "bool | mod:<m> | enum:<v1,v2,...>");
  sPower->add_option("--budget", o.budget, "input enumeration ceiling");
  sPower->add_option("--tau-budget", o.tauBudget, "intervention enumeration ceiling");
  sPower->add_flag("--dump", o.dump, "also emit the full relation as sorted pairs");

  auto* sCompare = app.add_subcommand("compare", "order two semantics by predictive power");
  sCompare->add_option("program", o.path, "program file (.slp)")->required();
  sCompare->add_option("--left", o.left, "first semantics (trivial|trace|static)")->required();
  sCompare->add_option("--right", o.right, "second semantics")->required();
  sCompare->add_option("--mode", o.mode, "functional|causal");
  sCompare->add_option("--domain", o.domain, "bool | mod:<m> | enum:<v1,v2,...>");
  sCompare->add_option("--budget", o.budget, "input enumeration ceiling");
  sCompare->add_option("--tau-budget", o.tauBudget, "intervention enumeration ceiling");

  for (auto* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  std::vector<const char*> argv;
  argv.push_back("provcausal");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*sValidate) return cmdValidate(o, out);
    if (*sEval) return cmdEval(o, out);
    if (*sToCausal) return cmdToCausal(o, out);
    if (*sIntervene) return cmdIntervene(o, out);
    if (*sCause) return cmdCause(o, out);
    if (*sCauses) return cmdCauses(o, out);
    if (*sInfer) return cmdInfer(o, out);
    if (*sAudit) return cmdAudit(o, out);
    if (*sConjecture) return cmdConjecture(o, out);
    if (*sTrace) return cmdTrace(o, out);
    if (*sApprox) return cmdApprox(o, out);
    if (*sPower) return cmdPower(o, out);
    if (*sCompare) return cmdCompare(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no subcommand\n";
  return 2;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace provcausal::cli
