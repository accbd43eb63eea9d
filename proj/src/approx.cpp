#include "provcausal/approx.hpp"

#include <algorithm>
#include <climits>
#include <optional>

#include "provcausal/causal.hpp"
#include "provcausal/provgraph.hpp"
#include "provcausal/translate.hpp"

namespace provcausal::approx {

Mode modeFromName(const std::string& name) {
  if (name == "functional") return Mode::Functional;
  if (name == "causal") return Mode::Causal;
  throw Error("unknown mode '" + name + "', expected functional or causal");
}

Level levelFromName(const std::string& name) {
  if (name == "pointwise") return Level::Pointwise;
  if (name == "local") return Level::Local;
  if (name == "global") return Level::Global;
  throw Error("unknown level '" + name + "', expected pointwise, local or global");
}

namespace {

bool nextTuple(std::vector<Value>& t, int m) {
  for (int i = static_cast<int>(t.size()) - 1; i >= 0; --i) {
    auto& v = t[static_cast<size_t>(i)];
    if (static_cast<int>(v) + 1 < m) {
      ++v;
      return true;
    }
    v = 0;
  }
  return false;
}

// base^n, saturating just past cap so callers can compare against budgets
long long spaceSize(int base, int n, long long cap) {
  long long s = 1;
  for (int i = 0; i < n; ++i) {
    if (s > cap / base) return cap + 1;
    s *= base;
  }
  return s;
}

unsigned long long powSat(unsigned long long b, int e) {
  unsigned long long r = 1;
  for (int i = 0; i < e; ++i) {
    if (b != 0 && r > ULLONG_MAX / b) return ULLONG_MAX;
    r *= b;
  }
  return r;
}

long long tupleRank(std::span<const Value> t, int m) {
  long long r = 0;
  for (Value v : t) r = r * m + v;
  return r;
}

translate::Options plainTranslation() {
  translate::Options o;
  o.faultTerms = false;
  o.endogenizeInputs = false;  // interventions never touch inputs here
  return o;
}

// precomputed per evaluation point u': the reference run fixing the
// variable set the model must reproduce
struct RefSide {
  std::vector<Value> u;
  slp::RunRecord rr;
  std::optional<slp::ReferenceCausalFunction> rcf;

  RefSide(const slp::Program& p, const Domain& d, std::span<const Value> uIn)
      : u(uIn.begin(), uIn.end()), rr(slp::run(p, d, uIn)) {}

  const slp::ReferenceCausalFunction& ref(const slp::Program& p, const Domain& d) {
    if (!rcf) rcf.emplace(p, d, u);
    return *rcf;
  }
};

struct Slot {
  enum class Kind { Shared, Input, Fixed };
  Kind kind = Kind::Fixed;
  int index = 0;  // model instruction (Shared) or input position (Input)
  Value fixed = 0;
};

struct LocalFn {
  const CompiledFn* fn = nullptr;  // the generating operation; the artifact copies it
  std::vector<Slot> slots;
  bool fallback = false;  // some parent is neither shared, input nor fixable
};

// the emitted graph at u read as a causal model, with each instance
// variable's one step function pulled out for the structural check
struct ModelSide {
  std::vector<Value> u;
  slp::RunRecord rr;
  slp::Emitted em;
  translate::Situation ts;
  causal::CompiledModel cm;

  std::map<std::string, int> instOf;  // instance name -> model instruction
  std::vector<int> instanceEndo;      // per instruction: endo index of its artifact
  std::vector<LocalFn> locals;
  std::vector<int> exoToInput;  // exo index -> program input position
  int nu = 0;

  ModelSide(const slp::Program& p, const Domain& d, slp::SemanticsKind kind,
            std::span<const Value> uIn)
      : u(uIn.begin(), uIn.end()),
        rr(slp::run(p, d, uIn)),
        em(slp::emit(p, d, uIn, kind)),
        ts(translate::toCausal(em.graph, em.interp, plainTranslation())),
        cm(ts.model) {
    nu = cm.exoCount();
    for (int i = 0; i < nu; ++i) {
      const std::string& name = cm.varName(i);
      auto it = std::find(p.inputs.begin(), p.inputs.end(), name);
      if (it == p.inputs.end())
        throw Error("model input '" + name + "' is not a program input");
      exoToInput.push_back(static_cast<int>(it - p.inputs.begin()));
    }
    for (size_t i = 0; i < rr.instructions.size(); ++i)
      instOf[rr.instructions[i].target] = static_cast<int>(i);

    // which endogenous variables can see an instance variable or an input
    // upstream: anything touched by either cannot be pinned to one value
    const int nv = cm.endoCount();
    std::vector<bool> dep(static_cast<size_t>(nv), false);
    for (int i : cm.topoOrder()) {
      if (instOf.count(cm.endoName(i))) {
        dep[static_cast<size_t>(i)] = true;
        continue;
      }
      for (int q : cm.parentsOf(i))
        if (q < nu || dep[static_cast<size_t>(q - nu)]) dep[static_cast<size_t>(i)] = true;
    }

    std::vector<Value> ctx(static_cast<size_t>(nu));
    for (int i = 0; i < nu; ++i)
      ctx[static_cast<size_t>(i)] = u[static_cast<size_t>(exoToInput[static_cast<size_t>(i)])];
    auto sigma = cm.solve(ctx);

    instanceEndo.resize(rr.instructions.size());
    locals.resize(rr.instructions.size());
    for (size_t i = 0; i < rr.instructions.size(); ++i) {
      int aIdx = cm.endoIndex(rr.instructions[i].target);
      instanceEndo[i] = aIdx;
      LocalFn lf;
      const auto& aParents = cm.parentsOf(aIdx);
      if (aParents.size() != 1 || aParents[0] < nu)
        throw Error("instance artifact '" + rr.instructions[i].target +
                    "' has an unexpected equation shape");
      int pEndo = aParents[0] - nu;
      lf.fn = &cm.fnOf(pEndo);
      for (int q : cm.parentsOf(pEndo)) {
        Slot s;
        if (q < nu) {
          s.kind = Slot::Kind::Input;
          s.index = exoToInput[static_cast<size_t>(q)];
        } else {
          int e = q - nu;
          auto jt = instOf.find(cm.endoName(e));
          if (jt != instOf.end()) {
            s.kind = Slot::Kind::Shared;
            s.index = jt->second;
          } else if (dep[static_cast<size_t>(e)]) {
            lf.fallback = true;
          } else {
            s.kind = Slot::Kind::Fixed;
            s.fixed = sigma[static_cast<size_t>(q)];
          }
        }
        lf.slots.push_back(s);
      }
      locals[static_cast<size_t>(i)] = std::move(lf);
    }
  }

  std::vector<Value> contextFor(std::span<const Value> uPrime) const {
    std::vector<Value> ctx(static_cast<size_t>(nu));
    for (int i = 0; i < nu; ++i)
      ctx[static_cast<size_t>(i)] =
          uPrime[static_cast<size_t>(exoToInput[static_cast<size_t>(i)])];
    return ctx;
  }
};

struct PairOutcome {
  bool pass = true;
  std::map<std::string, Value> tau;
  std::string variable;
  Value expected = 0, got = 0;
  std::string note;
  long long checked = 0;
};

// enumerate every intervention over the shared variables and compare the
// solved model against the reference, lexicographically (no intervention
// sorts before any value). exact but exponential; the structural route
// below is the default.
PairOutcome literalPair(ModelSide& ms, RefSide& rs, const slp::Program& p, const Domain& d,
                        const Options& opts) {
  PairOutcome out;
  const int m = d.size();
  const int nInst = static_cast<int>(rs.rr.instructions.size());
  if (spaceSize(m + 1, nInst, opts.tauBudget) > opts.tauBudget)
    throw BudgetError("intervention space (" + std::to_string(m + 1) + "^" +
                      std::to_string(nInst) + ") exceeds the budget of " +
                      std::to_string(opts.tauBudget));
  const auto& ref = rs.ref(p, d);
  auto ctx = ms.contextFor(rs.u);
  std::vector<int> forced(static_cast<size_t>(ms.cm.endoCount()), -1);
  std::vector<Value> state(static_cast<size_t>(nInst), 0);  // 0 absent, k forces k-1
  for (;;) {
    std::map<std::string, Value> tau;
    for (int i = 0; i < nInst; ++i) {
      if (state[static_cast<size_t>(i)] == 0) continue;
      Value v = static_cast<Value>(state[static_cast<size_t>(i)] - 1);
      const std::string& name = rs.rr.instructions[static_cast<size_t>(i)].target;
      tau[name] = v;
      forced[static_cast<size_t>(ms.instanceEndo[static_cast<size_t>(ms.instOf.at(name))])] =
          v;
    }
    auto modelVals = ms.cm.solve(ctx, forced);
    auto refVals = ref.apply(tau);
    ++out.checked;
    for (int i = 0; i < nInst; ++i) {
      const std::string& name = rs.rr.instructions[static_cast<size_t>(i)].target;
      Value got =
          modelVals[static_cast<size_t>(ms.nu + ms.instanceEndo[static_cast<size_t>(
                        ms.instOf.at(name))])];
      Value want = refVals[static_cast<size_t>(i)];
      if (got != want) {
        out.pass = false;
        out.tau = tau;
        out.variable = name;
        out.expected = want;
        out.got = got;
        std::fill(forced.begin(), forced.end(), -1);
        return out;
      }
    }
    std::fill(forced.begin(), forced.end(), -1);
    if (!nextTuple(state, m + 1)) break;
  }
  return out;
}

// agreement under every intervention, decided one variable at a time:
// with inputs pinned at the evaluation point, each shared variable's step
// function must match the reference's over all joint parent values. exact
// because a full forcing of the other variables realizes any combination.
PairOutcome pairCheck(ModelSide& ms, RefSide& rs, const slp::Program& p, const Domain& d,
                      const Options& opts, bool polishCounterexample) {
  PairOutcome out;
  const int m = d.size();

  // the model must carry every variable of this run
  for (const auto& ins : rs.rr.instructions) {
    if (!ms.instOf.count(ins.target)) {
      out.pass = false;
      out.variable = ins.target;
      out.note = "run variable '" + ins.target + "' is missing from the model";
      return out;
    }
  }

  bool literal = opts.forceLiteral;
  for (const auto& ins : rs.rr.instructions) {
    const auto& lf = ms.locals[static_cast<size_t>(ms.instOf.at(ins.target))];
    if (lf.fallback) literal = true;
    for (const auto& s : lf.slots)
      if (s.kind == Slot::Kind::Shared &&
          !rs.rr.instanceIndex.count(
              ms.rr.instructions[static_cast<size_t>(s.index)].target))
        literal = true;  // model parent outside this run's variables
  }
  if (literal) return literalPair(ms, rs, p, d, opts);

  for (int vi = 0; vi < static_cast<int>(rs.rr.instructions.size()); ++vi) {
    const auto& ins = rs.rr.instructions[static_cast<size_t>(vi)];
    const auto& lf = ms.locals[static_cast<size_t>(ms.instOf.at(ins.target))];

    // joint argument set, as reference instruction indices
    std::vector<int> joint;
    auto addJoint = [&](int rsIdx) {
      if (std::find(joint.begin(), joint.end(), rsIdx) == joint.end())
        joint.push_back(rsIdx);
    };
    for (const auto& s : lf.slots)
      if (s.kind == Slot::Kind::Shared)
        addJoint(rs.rr.instanceIndex.at(
            ms.rr.instructions[static_cast<size_t>(s.index)].target));
    for (const auto& a : ins.args)
      if (a.kind == slp::ArgRef::Kind::Instance) addJoint(a.index);
    std::sort(joint.begin(), joint.end());

    if (spaceSize(m, static_cast<int>(joint.size()), opts.tauBudget) > opts.tauBudget)
      throw BudgetError("joint parent space for '" + ins.target +
                        "' exceeds the intervention budget");

    std::vector<Value> combo(joint.size(), 0);
    std::map<int, Value> overrides;
    std::vector<Value> argv;
    do {
      overrides.clear();
      for (size_t k = 0; k < joint.size(); ++k) overrides[joint[k]] = combo[k];
      argv.clear();
      for (const auto& s : lf.slots) {
        switch (s.kind) {
          case Slot::Kind::Input:
            argv.push_back(rs.u[static_cast<size_t>(s.index)]);
            break;
          case Slot::Kind::Fixed:
            argv.push_back(s.fixed);
            break;
          case Slot::Kind::Shared: {
            int rsIdx = rs.rr.instanceIndex.at(
                ms.rr.instructions[static_cast<size_t>(s.index)].target);
            argv.push_back(overrides.at(rsIdx));
            break;
          }
        }
      }
      Value got = lf.fn->apply(argv);
      Value want = slp::stepApply(rs.rr, vi, d, overrides);
      ++out.checked;
      if (got != want) {
        out.pass = false;
        out.variable = ins.target;
        out.expected = want;
        out.got = got;
        for (size_t k = 0; k < joint.size(); ++k)
          out.tau[rs.rr.instructions[static_cast<size_t>(joint[k])].target] = combo[k];
        if (polishCounterexample) {
          // re-derive the lexicographically first failing intervention
          // when the literal scan fits the budget
          const int nInst = static_cast<int>(rs.rr.instructions.size());
          if (spaceSize(m + 1, nInst, opts.tauBudget) <= opts.tauBudget) {
            PairOutcome lex = literalPair(ms, rs, p, d, opts);
            if (!lex.pass) return lex;
          }
        }
        return out;
      }
    } while (nextTuple(combo, m));
  }
  return out;
}

unsigned long long skippedFor(const ModelSide& ms, const RefSide& rs, int m) {
  int shared = 0;
  for (const auto& [name, idx] : rs.rr.instanceIndex)
    if (ms.instOf.count(name)) ++shared;
  unsigned long long whole = powSat(static_cast<unsigned long long>(m) + 1,
                                    static_cast<int>(ms.rr.instructions.size()));
  unsigned long long kept =
      powSat(static_cast<unsigned long long>(m) + 1, shared);
  return whole >= kept ? whole - kept : 0;
}

long long inputSpaceOrRefuse(const slp::Program& p, const Domain& d, const Options& opts,
                             bool squared) {
  const int n = static_cast<int>(p.inputs.size());
  long long space = spaceSize(d.size(), n, opts.inputBudget);
  if (space > opts.inputBudget)
    throw BudgetError("input space " + std::to_string(d.size()) + "^" + std::to_string(n) +
                      " exceeds the budget of " + std::to_string(opts.inputBudget));
  if (squared) {
    if (space > 0 && space > opts.inputBudget / space)
      throw BudgetError("input pair space (" + std::to_string(space) + "^2) exceeds the budget of " +
                        std::to_string(opts.inputBudget));
  }
  return space;
}

std::vector<Value> firstTuple(size_t n) { return std::vector<Value>(n, 0); }

}  // namespace

Verdict checkFunctional(const slp::Program& p, const Domain& d, slp::SemanticsKind kind,
                        Level level, const Options& opts) {
  if (level == Level::Local)
    throw Error("functional checks have pointwise and global levels only");
  const bool global = level == Level::Global;
  inputSpaceOrRefuse(p, d, opts, global);
  const int m = d.size();

  Verdict verdict;
  std::vector<Value> u = firstTuple(p.inputs.size());
  do {
    slp::Emitted em = slp::emit(p, d, u, kind);
    provgraph::Evaluator ev(em.graph, em.interp);
    if (!global) {
      Value want = slp::run(p, d, u).result;
      Value got = ev.resultAt(u);
      ++verdict.checked;
      if (got != want) {
        verdict.pass = false;
        verdict.counterexample = Counterexample{
            u, u, std::nullopt, em.graph.result, d.valueName(want), d.valueName(got), {}};
        return verdict;
      }
      continue;
    }
    std::vector<Value> uPrime = firstTuple(p.inputs.size());
    do {
      Value want = slp::run(p, d, uPrime).result;
      Value got = ev.resultAt(uPrime);
      ++verdict.checked;
      if (got != want) {
        verdict.pass = false;
        verdict.counterexample = Counterexample{
            u,      uPrime,           std::nullopt, em.graph.result,
            d.valueName(want), d.valueName(got), {}};
        return verdict;
      }
    } while (nextTuple(uPrime, m));
  } while (nextTuple(u, m));
  return verdict;
}

Verdict checkCausal(const slp::Program& p, const Domain& d, slp::SemanticsKind kind,
                    Level level, const Options& opts) {
  const bool global = level == Level::Global;
  inputSpaceOrRefuse(p, d, opts, global);
  const int m = d.size();

  Verdict verdict;
  std::vector<Value> u = firstTuple(p.inputs.size());
  do {
    ModelSide ms(p, d, kind, u);
    if (level == Level::Pointwise) {
      // no interventions: the solved model must reproduce the run
      auto vals = ms.cm.solve(ms.contextFor(u));
      for (size_t i = 0; i < ms.rr.instructions.size(); ++i) {
        Value got = vals[static_cast<size_t>(ms.nu + ms.instanceEndo[i])];
        Value want = ms.rr.values[i];
        ++verdict.checked;
        if (got != want) {
          verdict.pass = false;
          verdict.counterexample =
              Counterexample{u,
                             u,
                             std::map<std::string, Value>{},
                             ms.rr.instructions[i].target,
                             d.valueName(want),
                             d.valueName(got),
                             {}};
          return verdict;
        }
      }
      continue;
    }
    if (!global) {
      RefSide rs(p, d, u);
      PairOutcome po = pairCheck(ms, rs, p, d, opts, true);
      verdict.checked += po.checked;
      if (!po.pass) {
        verdict.pass = false;
        verdict.counterexample = Counterexample{
            u, u, po.tau, po.variable, d.valueName(po.expected), d.valueName(po.got), po.note};
        return verdict;
      }
      continue;
    }
    std::vector<Value> uPrime = firstTuple(p.inputs.size());
    do {
      RefSide rs(p, d, uPrime);
      verdict.skippedTau += skippedFor(ms, rs, m);
      PairOutcome po = pairCheck(ms, rs, p, d, opts, true);
      verdict.checked += po.checked;
      if (!po.pass) {
        verdict.pass = false;
        verdict.counterexample = Counterexample{
            u,        uPrime,           po.tau, po.variable, d.valueName(po.expected),
            d.valueName(po.got), po.note};
        return verdict;
      }
    } while (nextTuple(uPrime, m));
  } while (nextTuple(u, m));
  return verdict;
}

Probe probeCausal(const slp::Program& p, const Domain& d, slp::SemanticsKind kind,
                  std::span<const Value> u, const std::map<std::string, Value>& tau,
                  const std::string& variable, const Options&) {
  ModelSide ms(p, d, kind, u);
  auto it = ms.instOf.find(variable);
  if (it == ms.instOf.end())
    throw Error("'" + variable + "' is not a variable of this run");
  std::vector<int> forced(static_cast<size_t>(ms.cm.endoCount()), -1);
  for (const auto& [name, v] : tau) {
    auto jt = ms.instOf.find(name);
    if (jt == ms.instOf.end())
      throw Error("intervention names '" + name + "', not a variable of this run");
    forced[static_cast<size_t>(ms.instanceEndo[static_cast<size_t>(jt->second)])] = v;
  }
  auto vals = ms.cm.solve(ms.contextFor(u), forced);
  slp::ReferenceCausalFunction ref(p, d, std::vector<Value>(u.begin(), u.end()));
  auto refVals = ref.apply(tau);
  Probe pr;
  pr.got = vals[static_cast<size_t>(ms.nu + ms.instanceEndo[static_cast<size_t>(it->second)])];
  pr.expected = refVals[static_cast<size_t>(it->second)];
  pr.agree = pr.got == pr.expected;
  return pr;
}

PowerRelation::PowerRelation(int inputCount, int domainSize,
                             std::vector<std::pair<std::vector<Value>, std::vector<Value>>> pairs)
    : inputCount_(inputCount), domainSize_(domainSize), pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

bool PowerRelation::contains(std::span<const Value> u, std::span<const Value> uPrime) const {
  std::pair<std::vector<Value>, std::vector<Value>> key{
      std::vector<Value>(u.begin(), u.end()), std::vector<Value>(uPrime.begin(), uPrime.end())};
  return std::binary_search(pairs_.begin(), pairs_.end(), key);
}

bool PowerRelation::reflexive() const {
  std::vector<Value> u(static_cast<size_t>(inputCount_), 0);
  do {
    if (!contains(u, u)) return false;
  } while (nextTuple(u, domainSize_));
  return true;
}

bool PowerRelation::total() const {
  unsigned long long space = powSat(static_cast<unsigned long long>(domainSize_), inputCount_);
  unsigned long long square =
      space > 0 && space > ULLONG_MAX / space ? ULLONG_MAX : space * space;
  return static_cast<unsigned long long>(pairs_.size()) == square;
}

PowerRelation power(const slp::Program& p, const Domain& d, slp::SemanticsKind kind,
                    Mode mode, const Options& opts) {
  inputSpaceOrRefuse(p, d, opts, true);
  const int m = d.size();
  const int n = static_cast<int>(p.inputs.size());
  std::vector<std::pair<std::vector<Value>, std::vector<Value>>> pairs;

  if (mode == Mode::Functional) {
    // tabulate the program first, then test every emitted graph everywhere
    std::vector<Value> fTable;
    std::vector<Value> u = firstTuple(static_cast<size_t>(n));
    do {
      fTable.push_back(slp::run(p, d, u).result);
    } while (nextTuple(u, m));
    u = firstTuple(static_cast<size_t>(n));
    do {
      slp::Emitted em = slp::emit(p, d, u, kind);
      provgraph::Evaluator ev(em.graph, em.interp);
      std::vector<Value> uPrime = firstTuple(static_cast<size_t>(n));
      do {
        if (ev.resultAt(uPrime) == fTable[static_cast<size_t>(tupleRank(uPrime, m))])
          pairs.emplace_back(u, uPrime);
      } while (nextTuple(uPrime, m));
    } while (nextTuple(u, m));
    return PowerRelation(n, m, std::move(pairs));
  }

  std::vector<Value> u = firstTuple(static_cast<size_t>(n));
  do {
    ModelSide ms(p, d, kind, u);
    std::vector<Value> uPrime = firstTuple(static_cast<size_t>(n));
    do {
      RefSide rs(p, d, uPrime);
      if (pairCheck(ms, rs, p, d, opts, false).pass) pairs.emplace_back(u, uPrime);
    } while (nextTuple(uPrime, m));
  } while (nextTuple(u, m));
  return PowerRelation(n, m, std::move(pairs));
}

Ordering compare(const PowerRelation& a, const PowerRelation& b) {
  if (a.inputCount() != b.inputCount() || a.domainSize() != b.domainSize())
    throw Error("relations live on different input spaces");
  bool aInB = std::includes(b.pairs().begin(), b.pairs().end(), a.pairs().begin(),
                            a.pairs().end());
  bool bInA = std::includes(a.pairs().begin(), a.pairs().end(), b.pairs().begin(),
                            b.pairs().end());
  if (aInB && bInA) return Ordering::Equal;
  if (aInB) return Ordering::Less;
  if (bInA) return Ordering::Greater;
  return Ordering::Incomparable;
}

}  // namespace provcausal::approx
