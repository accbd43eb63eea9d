#include "provcausal/hpcause.hpp"

#include <algorithm>
#include <cstdint>

namespace provcausal::hpcause {

namespace {

// advance a value tuple in lexicographic order, first slot most
// significant; false once it wraps back to all zero
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

// visit every k-subset of [0, n) in lexicographic order; the callback
// returns true to stop early
template <class F>
bool forCombinations(int n, int k, F&& f) {
  if (k > n) return false;
  std::vector<int> idx(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
  for (;;) {
    if (f(idx)) return true;
    int i = k - 1;
    while (i >= 0 && idx[static_cast<size_t>(i)] == n - k + i) --i;
    if (i < 0) return false;
    ++idx[static_cast<size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
  }
}

constexpr int kMaxUniverse = 24;  // subset loops are 2^n; keep n sane

}  // namespace

Situation Situation::fromContext(const causal::CausalModel& m, const causal::Context& u) {
  Situation s(m);
  s.ctx_.resize(static_cast<size_t>(s.cm_.exoCount()));
  std::vector<bool> seen(s.ctx_.size(), false);
  for (const auto& [name, v] : u) {
    int idx = s.cm_.varIndex(name);
    if (idx >= s.cm_.exoCount())
      throw Error("context names endogenous variable '" + name + "'");
    if (static_cast<int>(v) >= s.cm_.domain().size())
      throw Error("context value out of range for '" + name + "'");
    s.ctx_[static_cast<size_t>(idx)] = v;
    seen[static_cast<size_t>(idx)] = true;
  }
  for (size_t i = 0; i < seen.size(); ++i)
    if (!seen[i])
      throw Error("context misses exogenous variable '" + s.cm_.varName(static_cast<int>(i)) + "'");
  auto all = s.cm_.solve(s.ctx_);
  s.sigmaEndo_.assign(all.begin() + s.cm_.exoCount(), all.end());
  return s;
}

Situation Situation::fromValuation(const causal::CausalModel& m, const causal::Valuation& vals) {
  causal::CausalSituation cs{m, vals};
  auto rep = causal::isConsistent(cs);
  if (!rep.consistent) {
    std::string msg = "inconsistent situation, equations violated at:";
    for (const auto& n : rep.mismatched) msg += " " + n;
    throw Error(msg);
  }
  Situation s(m);
  s.ctx_.resize(static_cast<size_t>(s.cm_.exoCount()));
  s.sigmaEndo_.resize(static_cast<size_t>(s.cm_.endoCount()));
  for (const auto& [name, v] : vals) {
    int idx = s.cm_.varIndex(name);
    if (idx < s.cm_.exoCount())
      s.ctx_[static_cast<size_t>(idx)] = v;
    else
      s.sigmaEndo_[static_cast<size_t>(idx - s.cm_.exoCount())] = v;
  }
  return s;
}

Value Situation::sigmaOf(const std::string& var) const {
  int idx = cm_.varIndex(var);
  if (idx < cm_.exoCount()) return ctx_[static_cast<size_t>(idx)];
  return sigmaEndo_[static_cast<size_t>(idx - cm_.exoCount())];
}

struct Engine::Impl {
  const Situation& sit;
  const causal::CompiledModel& cm;
  Options opts;
  int nu, nv, m;

  std::vector<int> forced;   // per endo index, -1 for untouched
  std::vector<Value> vals;   // evaluation scratch, exo first
  std::vector<Value> args;   // argument gather scratch

  std::map<int, std::vector<int>> ancCache;   // target -> sorted endo ancestors
  std::map<int, std::vector<int>> orderCache; // target -> eval order within cone
  std::map<std::pair<int, std::vector<int>>, Verdict> weakMemo;
  std::map<std::pair<int, int>, std::vector<CauseSet>> causesMemo;

  Impl(const Situation& s, Options o)
      : sit(s), cm(s.compiled()), opts(o), nu(cm.exoCount()), nv(cm.endoCount()),
        m(cm.domain().size()) {
    forced.assign(static_cast<size_t>(nv), -1);
    vals.resize(static_cast<size_t>(nu + nv));
    std::copy(sit.context().begin(), sit.context().end(), vals.begin());
  }

  const std::vector<int>& ancestorsOf(int y) {
    auto it = ancCache.find(y);
    if (it != ancCache.end()) return it->second;
    auto anc = cm.endoAncestors(y);
    std::sort(anc.begin(), anc.end());
    return ancCache.emplace(y, std::move(anc)).first->second;
  }

  // evaluation order restricted to the target's ancestor cone; values
  // outside the cone can never reach the target, so this is exact
  const std::vector<int>& evalOrderFor(int y) {
    auto it = orderCache.find(y);
    if (it != orderCache.end()) return it->second;
    const auto& anc = ancestorsOf(y);
    std::vector<bool> keep(static_cast<size_t>(nv), false);
    for (int a : anc) keep[static_cast<size_t>(a)] = true;
    keep[static_cast<size_t>(y)] = true;
    std::vector<int> order;
    for (int i : cm.topoOrder())
      if (keep[static_cast<size_t>(i)]) order.push_back(i);
    return orderCache.emplace(y, std::move(order)).first->second;
  }

  // solve for the target under the current forced entries
  Value evalTarget(int y) {
    for (int i : evalOrderFor(y)) {
      Value out;
      int f = forced[static_cast<size_t>(i)];
      if (f >= 0) {
        out = static_cast<Value>(f);
      } else {
        const auto& par = cm.parentsOf(i);
        args.resize(par.size());
        for (size_t k = 0; k < par.size(); ++k)
          args[k] = vals[static_cast<size_t>(par[k])];
        out = cm.fnOf(i).apply(args);
      }
      vals[static_cast<size_t>(nu + i)] = out;
      if (i == y) return out;
    }
    throw Error("target missing from its own evaluation order");
  }

  Witness makeWitness(const std::vector<int>& W, const std::vector<Value>& wP,
                      const std::vector<int>& X, const std::vector<Value>& xP) {
    Witness wit;
    for (size_t i = 0; i < W.size(); ++i) {
      wit.w.push_back(cm.endoName(W[i]));
      wit.wPrime.emplace_back(cm.endoName(W[i]), wP[i]);
    }
    for (size_t i = 0; i < X.size(); ++i)
      wit.xPrime.emplace_back(cm.endoName(X[i]), xP[i]);
    return wit;
  }

  // the universal half: target keeps its value under candidate at sigma,
  // contingency at wPrime, and every subset of the rest reset to sigma
  bool holdsUnderResets(int y, const std::vector<int>& X, const std::vector<int>& W,
                        const std::vector<Value>& wPrime, const std::vector<int>& zUniverse) {
    const Value want = sit.sigmaEndo()[static_cast<size_t>(y)];
    if (zUniverse.size() > static_cast<size_t>(kMaxUniverse))
      throw Error("cause search needs 2^" + std::to_string(zUniverse.size()) +
                  " reset sets; refusing");
    for (size_t i = 0; i < X.size(); ++i)
      forced[static_cast<size_t>(X[i])] =
          sit.sigmaEndo()[static_cast<size_t>(X[i])];
    for (size_t i = 0; i < W.size(); ++i)
      forced[static_cast<size_t>(W[i])] = wPrime[i];
    bool ok = true;
    const std::uint32_t limit = 1u << zUniverse.size();
    for (std::uint32_t mask = 0; mask < limit && ok; ++mask) {
      for (size_t b = 0; b < zUniverse.size(); ++b)
        if (mask & (1u << b))
          forced[static_cast<size_t>(zUniverse[b])] =
              sit.sigmaEndo()[static_cast<size_t>(zUniverse[b])];
      if (evalTarget(y) != want) ok = false;
      for (size_t b = 0; b < zUniverse.size(); ++b)
        if (mask & (1u << b)) forced[static_cast<size_t>(zUniverse[b])] = -1;
    }
    for (int x : X) forced[static_cast<size_t>(x)] = -1;
    for (int w : W) forced[static_cast<size_t>(w)] = -1;
    return ok;
  }

  // least witness search. contingency sets go by size then
  // lexicographically over the variable order, candidate values then
  // contingency values in domain order, so the first hit is canonical.
  Verdict weakSearch(int y, const std::vector<int>& X) {
    Verdict out;
    const Value want = sit.sigmaEndo()[static_cast<size_t>(y)];
    std::vector<bool> inX(static_cast<size_t>(nv), false);
    for (int x : X) inX[static_cast<size_t>(x)] = true;

    std::vector<int> wUniverse;
    if (opts.pruneToAncestors) {
      for (int v : ancestorsOf(y))
        if (!inX[static_cast<size_t>(v)]) wUniverse.push_back(v);
    } else {
      for (int v = 0; v < nv; ++v)
        if (!inX[static_cast<size_t>(v)]) wUniverse.push_back(v);
    }
    if (wUniverse.size() > static_cast<size_t>(kMaxUniverse))
      throw Error("cause search over " + std::to_string(wUniverse.size()) +
                  " contingency variables; refusing");

    const int n = static_cast<int>(wUniverse.size());
    for (int k = 0; k <= n && !out.weak; ++k) {
      forCombinations(n, k, [&](const std::vector<int>& pick) {
        std::vector<int> W;
        W.reserve(pick.size());
        for (int p : pick) W.push_back(wUniverse[static_cast<size_t>(p)]);
        std::vector<bool> inW(static_cast<size_t>(nv), false);
        for (int w : W) inW[static_cast<size_t>(w)] = true;

        std::vector<int> zUniverse;
        if (opts.pruneToAncestors) {
          for (int v : ancestorsOf(y))
            if (!inX[static_cast<size_t>(v)] && !inW[static_cast<size_t>(v)])
              zUniverse.push_back(v);
        } else {
          for (int v = 0; v < nv; ++v)
            if (!inX[static_cast<size_t>(v)] && !inW[static_cast<size_t>(v)])
              zUniverse.push_back(v);
        }

        std::map<std::vector<Value>, bool> resetMemo;
        std::vector<Value> xPrime(X.size(), 0);
        do {
          std::vector<Value> wPrime(W.size(), 0);
          do {
            for (size_t i = 0; i < X.size(); ++i)
              forced[static_cast<size_t>(X[i])] = xPrime[i];
            for (size_t i = 0; i < W.size(); ++i)
              forced[static_cast<size_t>(W[i])] = wPrime[i];
            bool flips = evalTarget(y) != want;
            for (int x : X) forced[static_cast<size_t>(x)] = -1;
            for (int w : W) forced[static_cast<size_t>(w)] = -1;
            if (!flips) continue;
            auto mit = resetMemo.find(wPrime);
            bool holds;
            if (mit != resetMemo.end()) {
              holds = mit->second;
            } else {
              holds = holdsUnderResets(y, X, W, wPrime, zUniverse);
              resetMemo.emplace(wPrime, holds);
            }
            if (holds) {
              out.weak = true;
              out.witness = makeWitness(W, wPrime, X, xPrime);
              return true;
            }
          } while (nextTuple(wPrime, m));
        } while (nextTuple(xPrime, m));
        return false;
      });
      if (out.weak) break;
    }
    return out;
  }

  Verdict weak(int y, std::vector<int> X) {
    std::sort(X.begin(), X.end());
    auto key = std::make_pair(y, X);
    auto it = weakMemo.find(key);
    if (it != weakMemo.end()) return it->second;
    Verdict v = weakSearch(y, X);
    return weakMemo.emplace(std::move(key), std::move(v)).first->second;
  }

  std::vector<VarVal> withSigma(const std::vector<int>& idxs) {
    std::vector<VarVal> out;
    for (int i : idxs)
      out.emplace_back(cm.endoName(i), sit.sigmaEndo()[static_cast<size_t>(i)]);
    return out;
  }

  Verdict actual(int y, std::vector<int> X) {
    std::sort(X.begin(), X.end());
    Verdict v = weak(y, X);
    if (!v.weak) return v;
    const int sz = static_cast<int>(X.size());
    for (int k = 1; k < sz; ++k) {
      bool found = forCombinations(sz, k, [&](const std::vector<int>& pick) {
        std::vector<int> S;
        for (int p : pick) S.push_back(X[static_cast<size_t>(p)]);
        if (weak(y, S).weak) {
          v.failingSubset = withSigma(S);
          return true;
        }
        return false;
      });
      if (found) return v;
    }
    v.actual = true;
    return v;
  }

  const std::vector<CauseSet>& causesOf(int y, int maxSize) {
    auto key = std::make_pair(y, maxSize);
    auto it = causesMemo.find(key);
    if (it != causesMemo.end()) return it->second;

    std::vector<int> universe;
    if (opts.pruneToAncestors) {
      universe = ancestorsOf(y);
    } else {
      for (int v = 0; v < nv; ++v)
        if (v != y) universe.push_back(v);
    }
    std::vector<CauseSet> found;
    std::vector<std::vector<int>> weakSets;  // known weak sets, for minimality
    const int n = static_cast<int>(universe.size());
    for (int k = 1; k <= maxSize && k <= n; ++k) {
      forCombinations(n, k, [&](const std::vector<int>& pick) {
        std::vector<int> X;
        for (int p : pick) X.push_back(universe[static_cast<size_t>(p)]);
        bool covered = std::any_of(weakSets.begin(), weakSets.end(), [&](const auto& S) {
          return S.size() < X.size() &&
                 std::includes(X.begin(), X.end(), S.begin(), S.end());
        });
        if (covered) return false;  // some weak proper subset, not minimal
        Verdict v = weak(y, X);
        if (v.weak) {
          weakSets.push_back(X);
          found.push_back(CauseSet{withSigma(X), *v.witness});
        }
        return false;
      });
    }
    return causesMemo.emplace(std::move(key), std::move(found)).first->second;
  }
};

Engine::Engine(const Situation& s, Options opts) : impl_(new Impl(s, opts)) {}
Engine::~Engine() = default;

Verdict Engine::weakVerdict(const std::vector<int>& candidate, int target) {
  return impl_->weak(target, candidate);
}

Verdict Engine::actualVerdict(const std::vector<int>& candidate, int target) {
  return impl_->actual(target, candidate);
}

const std::vector<CauseSet>& Engine::causesOf(int target, int maxSize) {
  return impl_->causesOf(target, maxSize);
}

bool Engine::partOf(int member, int target, int maxSize) {
  return supportingCause(member, target, maxSize) != nullptr;
}

const CauseSet* Engine::supportingCause(int member, int target, int maxSize) {
  const std::string& name = impl_->cm.endoName(member);
  for (const auto& cs : causesOf(target, maxSize))
    for (const auto& [n, v] : cs.members)
      if (n == name) return &cs;
  return nullptr;
}

namespace {

// resolve and sanity check a query: names must be distinct endogenous
// variables carrying their observed values, target outside the set
std::vector<int> checkQuery(const Situation& s, const std::vector<VarVal>& candidate,
                            const VarVal& target, int& yOut) {
  const auto& cm = s.compiled();
  if (candidate.empty()) throw Error("candidate set is empty");
  yOut = cm.endoIndex(target.first);
  if (s.sigmaEndo()[static_cast<size_t>(yOut)] != target.second)
    throw Error("target '" + target.first + "' does not take value '" +
                cm.domain().valueName(target.second) + "' here");
  std::vector<int> X;
  for (const auto& [name, v] : candidate) {
    int i = cm.endoIndex(name);
    if (i == yOut) throw Error("candidate '" + name + "' is the target");
    if (std::find(X.begin(), X.end(), i) != X.end())
      throw Error("candidate '" + name + "' listed twice");
    if (s.sigmaEndo()[static_cast<size_t>(i)] != v)
      throw Error("candidate '" + name + "' does not take value '" +
                  cm.domain().valueName(v) + "' here");
    X.push_back(i);
  }
  return X;
}

}  // namespace

Verdict isWeakCause(const Situation& s, const std::vector<VarVal>& candidate,
                    const VarVal& target, const Options& opts) {
  int y = 0;
  auto X = checkQuery(s, candidate, target, y);
  Engine e(s, opts);
  return e.weakVerdict(X, y);
}

Verdict isActualCause(const Situation& s, const std::vector<VarVal>& candidate,
                      const VarVal& target, const Options& opts) {
  int y = 0;
  auto X = checkQuery(s, candidate, target, y);
  Engine e(s, opts);
  return e.actualVerdict(X, y);
}

std::vector<CauseSet> enumerateActualCauses(const Situation& s, const VarVal& target,
                                            int maxSize, const Options& opts) {
  if (maxSize < 1) throw Error("maxSize must be at least 1");
  int y = s.compiled().endoIndex(target.first);
  if (s.sigmaEndo()[static_cast<size_t>(y)] != target.second)
    throw Error("target '" + target.first + "' does not take value '" +
                s.compiled().domain().valueName(target.second) + "' here");
  Engine e(s, opts);
  return e.causesOf(y, maxSize);
}

bool isPartOfActualCause(const Situation& s, const VarVal& member, const VarVal& target,
                         int maxSize, const Options& opts) {
  if (maxSize < 1) throw Error("maxSize must be at least 1");
  const auto& cm = s.compiled();
  int y = cm.endoIndex(target.first);
  int x = cm.endoIndex(member.first);
  if (s.sigmaEndo()[static_cast<size_t>(y)] != target.second)
    throw Error("target '" + target.first + "' does not take value '" +
                cm.domain().valueName(target.second) + "' here");
  if (s.sigmaEndo()[static_cast<size_t>(x)] != member.second)
    throw Error("candidate '" + member.first + "' does not take value '" +
                cm.domain().valueName(member.second) + "' here");
  if (x == y) return false;
  Engine e(s, opts);
  return e.partOf(x, y, maxSize);
}

}  // namespace provcausal::hpcause
