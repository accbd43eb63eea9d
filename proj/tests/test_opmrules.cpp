#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "provcausal/hpcause.hpp"
#include "provcausal/opmrules.hpp"
#include "provcausal/provgraph.hpp"
#include "provcausal/translate.hpp"
#include "support/gen.hpp"
#include "support/graph_oracle.hpp"
#include "support/rng.hpp"

using namespace provcausal;
namespace pg = provcausal::provgraph;
namespace om = provcausal::opmrules;

namespace {

std::string fx(const std::string& n) {
  return std::string(PROVCAUSAL_FIXTURE_DIR) + "/" + n;
}

bool sortedUnique(const std::vector<om::Edge>& edges) {
  for (size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i - 1] < edges[i])) return false;
  return true;
}

// x = and(z, y) where z is itself a copy of y; the direct edge from x
// to y is then carried entirely by the copy sitting between them
pg::ProvGraph relayGraph() {
  pg::ProvGraph g;
  g.domain = Domain::boolean();
  g.artifacts = {{"y", "1", true}, {"z", "1", false}, {"x", "1", false}};
  g.processes = {{"a", "and2"}, {"c", "copy1"}};
  g.used = {{"c", "y", 1}, {"a", "z", 1}, {"a", "y", 2}};
  g.generated = {{"z", "c"}, {"x", "a"}};
  g.result = "x";
  g.inputs = {"y"};
  return g;
}

pg::Interpretation relayInterp() {
  pg::Interpretation in;
  in.ops.push_back({"and2", 2, FunctionSpec::fromBuiltin("and")});
  in.ops.push_back({"copy1", 1, FunctionSpec::fromBuiltin("copy")});
  return in;
}

}  // namespace

TEST_CASE("inference- cake base relations and closures") {
  auto g = pg::readGraphFile(fx("cake.json"));
  auto e = om::infer(g);
  CHECK(e.used.size() == 9);
  CHECK(e.wasGeneratedBy.size() == 4);
  CHECK(e.wasDerivedFrom.size() == 9);
  CHECK(e.wasTriggeredBy.size() == 3);
  CHECK(e.wasDerivedFromPlus.size() == 28);
  CHECK(e.wasTriggeredByPlus.size() == 6);

  for (const auto* list : {&e.used, &e.wasGeneratedBy, &e.wasDerivedFrom,
                           &e.wasTriggeredBy, &e.wasDerivedFromPlus,
                           &e.wasTriggeredByPlus})
    CHECK(sortedUnique(*list));

  // closures contain their base relations
  auto wdf = testsupport::toSet(e.wasDerivedFrom);
  auto wdfP = testsupport::toSet(e.wasDerivedFromPlus);
  CHECK(std::includes(wdfP.begin(), wdfP.end(), wdf.begin(), wdf.end()));

  CHECK(wdf.count({"mix", "water"}) == 1);
  CHECK(wdfP.count({"cake", "water"}) == 1);
  CHECK(wdf.count({"cake", "water"}) == 0);
  auto wtbP = testsupport::toSet(e.wasTriggeredByPlus);
  CHECK(wtbP.count({"cooling", "mixing"}) == 1);
}

TEST_CASE("inference matches plain reachability on random graphs") {
  testsupport::Rng r(90210);
  for (int i = 0; i < 30; ++i) {
    auto fxr = testsupport::randomGraph(r, 1 + r.below(4), 1 + r.below(8));
    auto got = om::infer(fxr.graph);
    auto want = testsupport::naiveInfer(fxr.graph);
    INFO(pg::writeGraph(fxr.graph));
    CHECK(testsupport::toSet(got.used) == want.used);
    CHECK(testsupport::toSet(got.wasGeneratedBy) == want.wgb);
    CHECK(testsupport::toSet(got.wasDerivedFrom) == want.wdf);
    CHECK(testsupport::toSet(got.wasTriggeredBy) == want.wtb);
    CHECK(testsupport::toSet(got.wasDerivedFromPlus) == want.wdfPlus);
    CHECK(testsupport::toSet(got.wasTriggeredByPlus) == want.wtbPlus);
  }
}

TEST_CASE("inference refuses broken graphs") {
  auto g = pg::readGraphFile(fx("cake.json"));
  g.generated.push_back({"mix", "baking"});
  CHECK_THROWS_AS(om::infer(g), Error);
}

TEST_CASE("audit- every cake edge is causally sound") {
  auto g = pg::readGraphFile(fx("cake.json"));
  auto in = pg::readInterpretationFile(fx("cake-ops.json"));
  auto rep = om::audit(g, in);
  CHECK(rep.rows.size() == 34);  // 9 + 19 closure additions + 3 + 3
  CHECK(rep.sound == 34);
  CHECK(rep.spurious == 0);
  for (const auto& row : rep.rows) {
    CHECK(row.sound);
    REQUIRE(!row.cause.empty());
    bool carries = false;
    for (const auto& [n, v] : row.cause) carries = carries || n == row.to;
    CHECK(carries);
  }

  // relation blocks in order, (from, to) sorted inside each
  CHECK(rep.rows[0].relation == "wasDerivedFrom");
  CHECK(rep.rows[0].from == "bake");
  CHECK(rep.rows[0].to == "batter");
  CHECK(rep.rows[9].relation == "wasDerivedFrom+");
  CHECK(rep.rows[28].relation == "wasTriggeredBy");
  CHECK(rep.rows[31].relation == "wasTriggeredBy+");
}

TEST_CASE("audit- a constant step derives from nothing") {
  auto g = pg::readGraphFile(fx("constgate.json"));
  auto in = pg::readInterpretationFile(fx("constgate-ops.json"));
  auto rep = om::audit(g, in);
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.rows[0].relation == "wasDerivedFrom");
  CHECK(rep.rows[0].from == "out");
  CHECK(rep.rows[0].to == "x");
  CHECK(!rep.rows[0].sound);
  CHECK(rep.spurious == 1);
  CHECK(rep.sound == 0);
}

TEST_CASE("audit- a relay between two nodes voids their direct edge") {
  auto g = relayGraph();
  auto in = relayInterp();
  auto rep = om::audit(g, in);
  REQUIRE(rep.rows.size() == 4);
  // wdf rows (x,y), (x,z), (z,y) then the wtb row (a,c)
  CHECK(rep.rows[0].from == "x");
  CHECK(rep.rows[0].to == "y");
  CHECK(!rep.rows[0].sound);  // z carries the whole path
  CHECK(rep.rows[1].from == "x");
  CHECK(rep.rows[1].to == "z");
  CHECK(rep.rows[1].sound);
  CHECK(rep.rows[2].from == "z");
  CHECK(rep.rows[2].to == "y");
  CHECK(rep.rows[2].sound);
  CHECK(rep.rows[3].relation == "wasTriggeredBy");
  CHECK(rep.rows[3].from == "a");
  CHECK(rep.rows[3].to == "c");
  CHECK(rep.rows[3].sound);
  CHECK(rep.spurious == 1);
  CHECK(rep.sound == 3);
}

TEST_CASE("audit matches a first principles recomputation") {
  testsupport::Rng r(5150);
  om::AuditOptions aopts;
  for (int i = 0; i < 12; ++i) {
    auto fxr = testsupport::randomGraph(r, 1 + r.below(3), 1 + r.below(3));
    auto rep = om::audit(fxr.graph, fxr.interp, aopts);
    INFO(pg::writeGraph(fxr.graph));

    auto edges = testsupport::naiveInfer(fxr.graph);
    auto s = translate::toCausal(fxr.graph, fxr.interp, aopts.translate);
    REQUIRE(s.consistent);
    auto sit = hpcause::Situation::fromValuation(s.model, s.values);
    hpcause::Engine eng(sit);
    const auto& cm = sit.compiled();
    auto partOf = [&](const std::string& member, const std::string& target) {
      return eng.partOf(cm.endoIndex(member), cm.endoIndex(target), aopts.maxCauseSize);
    };
    auto strictlyBetween = [&](const testsupport::PairSet& plus, const std::string& from,
                               const std::string& to) {
      for (const auto& [a, b] : plus) {
        if (a != from) continue;
        const std::string& z = b;
        if (z == to) continue;
        if (plus.count({z, to}) && partOf(z, from) && partOf(to, z)) return true;
      }
      return false;
    };

    int sound = 0, spurious = 0;
    for (const auto& row : rep.rows) {
      bool cause = partOf(row.to, row.from);
      bool expect = cause;
      if (row.relation == "wasDerivedFrom")
        expect = cause && !strictlyBetween(edges.wdfPlus, row.from, row.to);
      else if (row.relation == "wasTriggeredBy")
        expect = cause && !strictlyBetween(edges.wtbPlus, row.from, row.to);
      CHECK(row.sound == expect);
      (row.sound ? sound : spurious)++;
    }
    CHECK(rep.sound == sound);
    CHECK(rep.spurious == spurious);

    // row coverage: base rows plus the strict closure additions
    size_t wantRows = edges.wdf.size() + edges.wtb.size();
    for (const auto& e : edges.wdfPlus) wantRows += edges.wdf.count(e) ? 0 : 1;
    for (const auto& e : edges.wtbPlus) wantRows += edges.wtb.count(e) ? 0 : 1;
    CHECK(rep.rows.size() == wantRows);
  }
}

TEST_CASE("audit refuses labels that break the equations") {
  auto g = pg::readGraphFile(fx("cake.json"));
  auto in = pg::readInterpretationFile(fx("cake-ops.json"));
  for (auto& a : g.artifacts)
    if (a.id == "cake") a.value = "0";
  CHECK_THROWS_AS(om::audit(g, in), Error);
}

TEST_CASE("conjecture- cake closure and causes coincide") {
  auto g = pg::readGraphFile(fx("cake.json"));
  auto in = pg::readInterpretationFile(fx("cake-ops.json"));
  auto rep = om::checkConjecture(g, in);
  CHECK(rep.ok());
  CHECK(rep.derivedNotCausal.empty());
  CHECK(rep.causalNotDerived.empty());
}

TEST_CASE("conjecture- the constant gate derives without causing") {
  auto g = pg::readGraphFile(fx("constgate.json"));
  auto in = pg::readInterpretationFile(fx("constgate-ops.json"));
  auto rep = om::checkConjecture(g, in);
  CHECK(!rep.ok());
  REQUIRE(rep.derivedNotCausal.size() == 1);
  CHECK(rep.derivedNotCausal[0].from == "out");
  CHECK(rep.derivedNotCausal[0].to == "x");
  CHECK(rep.causalNotDerived.empty());
}

TEST_CASE("conjecture matches a first principles recomputation") {
  testsupport::Rng r(808);
  om::AuditOptions aopts;
  for (int i = 0; i < 10; ++i) {
    auto fxr = testsupport::randomGraph(r, 1 + r.below(3), 1 + r.below(3));
    auto rep = om::checkConjecture(fxr.graph, fxr.interp, aopts);
    INFO(pg::writeGraph(fxr.graph));

    auto edges = testsupport::naiveInfer(fxr.graph);
    auto s = translate::toCausal(fxr.graph, fxr.interp, aopts.translate);
    auto sit = hpcause::Situation::fromValuation(s.model, s.values);
    hpcause::Engine eng(sit);
    const auto& cm = sit.compiled();

    std::set<std::pair<std::string, std::string>> wantDnc, wantCnd;
    for (const auto& a : fxr.graph.artifacts)
      for (const auto& b : fxr.graph.artifacts) {
        if (a.id == b.id) continue;
        bool derived = edges.wdfPlus.count({a.id, b.id}) != 0;
        bool causal = eng.partOf(cm.endoIndex(b.id), cm.endoIndex(a.id),
                                 aopts.maxCauseSize);
        if (derived && !causal) wantDnc.insert({a.id, b.id});
        if (causal && !derived) wantCnd.insert({a.id, b.id});
      }
    CHECK(testsupport::toSet(rep.derivedNotCausal) == wantDnc);
    CHECK(testsupport::toSet(rep.causalNotDerived) == wantCnd);
    // completeness holds on every generated graph
    CHECK(rep.causalNotDerived.empty());
  }
}
