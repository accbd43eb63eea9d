#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "provcausal/provgraph.hpp"
#include "provcausal/slp.hpp"
#include "provcausal/translate.hpp"

using namespace provcausal;
namespace pg = provcausal::provgraph;

namespace {

std::string fx(const std::string& n) {
  return std::string(PROVCAUSAL_FIXTURE_DIR) + "/" + n;
}

std::set<std::string> artifactIds(const pg::ProvGraph& g) {
  std::set<std::string> out;
  for (const auto& a : g.artifacts) out.insert(a.id);
  return out;
}

const slp::Program& chainProgram() {
  static slp::Program p = slp::parseFile(fx("chain.slp"));
  return p;
}

const slp::Program& powerProgram() {
  static slp::Program p = slp::parseFile(fx("power.slp"));
  return p;
}

}  // namespace

TEST_CASE("parsing shapes") {
  const auto& chain = chainProgram();
  CHECK(chain.inputs == std::vector<std::string>{"x"});
  REQUIRE(chain.body.size() == 2);
  CHECK(chain.body[0].target == "y");
  CHECK(chain.body[0].rhs.op == "add");
  CHECK(chain.returnVar == "z");

  const auto& power = powerProgram();
  CHECK(power.inputs == std::vector<std::string>{"u", "x", "y"});
  REQUIRE(power.body.size() == 3);
  CHECK(power.body[2].kind == slp::Stmt::Kind::Repeat);
  CHECK(power.body[2].count == "u");
  REQUIRE(power.body[2].body.size() == 1);
  CHECK(power.body[2].body[0].target == "acc");
}

TEST_CASE("static checks carry positions") {
  auto bad = [](const std::string& text) { return slp::parse(text); };

  CHECK_THROWS_WITH_AS(bad("input x;\ny := foo(x);\nreturn y"),
                       "program:2:6: unknown operation 'foo'", ParseError);
  CHECK_THROWS_WITH_AS(bad("input x;\ny := add(x, z);\nreturn y"),
                       "program:2:13: 'z' used before assignment", ParseError);
  CHECK_THROWS_WITH_AS(bad("input x;\ny := 1;\nw := if y then 1 else 0;\nreturn w"),
                       "program:3:6: guard 'y' is not an input", ParseError);
  CHECK_THROWS_WITH_AS(bad("input x;\ny := 1;\nrepeat y {\n  z := 1;\n}\nreturn x"),
                       "program:3:1: repeat count 'y' is not an input", ParseError);
  CHECK_THROWS_WITH_AS(bad("input x;\nx := 1;\nreturn x"),
                       "program:2:1: cannot assign to input 'x'", ParseError);
  CHECK_THROWS_WITH_AS(bad("input x;\ny := 1;\ny := 2;\nreturn y"),
                       "program:3:1: 'y' reassigned outside a repeat body", ParseError);
  CHECK_THROWS_WITH_AS(bad("input u;\nrepeat u {\n  y := 1;\n}\nreturn y"),
                       "program:5:1: return variable 'y' may be unassigned", ParseError);
  CHECK_THROWS_WITH_AS(bad("input x, x;\nreturn x"),
                       "program:1:1: input 'x' declared twice", ParseError);
  CHECK_THROWS_WITH_AS(bad("input return;\nreturn return"),
                       "program:1:7: 'return' is a keyword", ParseError);
  // assignments end in a semicolon, also inside repeat bodies
  CHECK_THROWS_WITH_AS(bad("input x;\ny := 1\nreturn y"),
                       "program:3:1: expected ';'", ParseError);
  CHECK_THROWS_WITH_AS(bad("input x;\nreturn x;\n"),
                       "program:2:9: trailing input after return", ParseError);
  CHECK_THROWS_WITH_AS(bad("input x;\ny := 01;\nreturn y"),
                       "program:2:6: number has a leading zero", ParseError);
  CHECK_THROWS_WITH_AS(bad("input x!;\nreturn x"),
                       "program:1:8: stray character '!'", ParseError);
  CHECK_THROWS_WITH_AS(bad("input x;\ny := not(x, x);\nreturn y"),
                       "program:2:6: 'not' takes exactly one argument", ParseError);
}

TEST_CASE("operation semantics") {
  Domain b = Domain::boolean();
  Domain m7 = Domain::mod(7);
  auto ev = [](const char* op, std::vector<Value> args, const Domain& d) {
    return slp::evalOp(op, args, d);
  };
  CHECK(ev("and", {1, 1, 0}, b) == 0);
  CHECK(ev("or", {0, 0, 1}, b) == 1);
  CHECK(ev("xor", {1, 1, 1}, b) == 1);
  CHECK(ev("not", {0}, b) == 1);
  CHECK(ev("copy", {5}, m7) == 5);
  CHECK(ev("add", {3, 5, 6}, m7) == 0);
  CHECK(ev("mul", {3, 5}, m7) == 1);
  CHECK_THROWS_AS(ev("add", {1, 1}, b), Error);
  CHECK_THROWS_AS(ev("and", {1, 1}, m7), Error);
  CHECK_THROWS_AS(ev("not", {1, 1}, b), Error);
  CHECK_THROWS_AS(ev("nand", {1, 1}, b), Error);
}

TEST_CASE("chain run") {
  Domain d = Domain::mod(97);
  auto rr = slp::run(chainProgram(), d, std::vector<Value>{3});
  CHECK(rr.result == 8);
  CHECK(rr.resultVar == "z");
  REQUIRE(rr.instructions.size() == 2);
  // single assignments keep their plain names
  CHECK(rr.instructions[0].target == "y");
  CHECK(rr.instructions[1].target == "z");
  CHECK(rr.values == std::vector<Value>{4, 8});
  CHECK(rr.instanceIndex.at("z") == 1);

  CHECK_THROWS_AS(slp::run(chainProgram(), d, std::vector<Value>{3, 4}), Error);
  CHECK_THROWS_AS(slp::run(chainProgram(), Domain::mod(5), std::vector<Value>{6}), Error);
}

TEST_CASE("literals must live in the domain") {
  CHECK_THROWS_WITH_AS(slp::run(chainProgram(), Domain::mod(2), std::vector<Value>{1}),
                       "program:3:13: literal 2 outside the domain", ParseError);
  CHECK_THROWS_WITH_AS(
      slp::run(chainProgram(), Domain::enumeration({"a", "b"}), std::vector<Value>{1}),
      "program:2:13: numeric literal in an enumeration domain", ParseError);
  // bool rejects add at evaluation, after the literal parses
  CHECK_THROWS_AS(slp::run(chainProgram(), Domain::boolean(), std::vector<Value>{1}), Error);
}

TEST_CASE("loops version their assignments") {
  Domain d = Domain::mod(7);
  auto rr = slp::run(powerProgram(), d, std::vector<Value>{2, 1, 2});
  REQUIRE(rr.instructions.size() == 4);
  CHECK(rr.instructions[0].target == "s");
  CHECK(rr.instructions[1].target == "acc@0");
  CHECK(rr.instructions[2].target == "acc@1");
  CHECK(rr.instructions[3].target == "acc@2");
  CHECK(rr.values == std::vector<Value>{3, 1, 3, 2});
  CHECK(rr.resultVar == "acc@2");
  CHECK(rr.result == 2);

  // a zero count leaves a single plain assignment
  auto rr0 = slp::run(powerProgram(), d, std::vector<Value>{0, 3, 4});
  REQUIRE(rr0.instructions.size() == 2);
  CHECK(rr0.instructions[1].target == "acc");
  CHECK(rr0.resultVar == "acc");
  CHECK(rr0.result == 1);

  // repeat needs a numeric domain even when the body is boolean-legal
  auto boolLoop =
      slp::parse("input u, x;\ny := not(x);\nrepeat u {\ny := not(y);\n}\nreturn y");
  CHECK_THROWS_WITH_AS(slp::run(boolLoop, Domain::boolean(), std::vector<Value>{1, 1}),
                       "program:3:1: repeat needs a modular numeric domain", ParseError);
}

TEST_CASE("power program computes powers") {
  Domain d = Domain::mod(7);
  for (int u = 0; u < 7; ++u)
    for (int x = 0; x < 7; ++x)
      for (int y = 0; y < 7; ++y) {
        int base = (x + y) % 7;
        int want = 1;
        for (int i = 0; i < u; ++i) want = (want * base) % 7;
        auto rr = slp::run(powerProgram(), d,
                           std::vector<Value>{static_cast<Value>(u), static_cast<Value>(x),
                                              static_cast<Value>(y)});
        CHECK(rr.result == want);
      }
}

TEST_CASE("stepApply recomputes one instruction") {
  Domain d = Domain::mod(7);
  auto rr = slp::run(powerProgram(), d, std::vector<Value>{2, 1, 2});
  CHECK(slp::stepApply(rr, 3, d, {}) == 2);
  CHECK(slp::stepApply(rr, 3, d, {{2, 0}}) == 0);  // acc@1 := 0
  CHECK(slp::stepApply(rr, 0, d, {{1, 5}}) == 3);  // s reads inputs only
}

TEST_CASE("reference causal function forces instances") {
  Domain d = Domain::mod(7);
  slp::ReferenceCausalFunction f(powerProgram(), d, {2, 1, 2});
  CHECK(f.apply({}) == std::vector<Value>{3, 1, 3, 2});
  auto forced = f.apply({{"acc@1", 0}});
  CHECK(forced == std::vector<Value>{3, 1, 0, 0});
  CHECK(f.resultOf(forced) == 0);
  CHECK_THROWS_AS(f.apply({{"ghost", 1}}), Error);
  CHECK_THROWS_AS(f.apply({{"acc@1", 9}}), Error);

  // the frozen observation the approximation checks revolve around:
  // forcing y to 10 must double to 20 in the true reading
  Domain d97 = Domain::mod(97);
  slp::ReferenceCausalFunction g(chainProgram(), d97, {3});
  auto vals = g.apply({{"y", 10}});
  CHECK(vals == std::vector<Value>{10, 20});
  CHECK(g.resultOf(vals) == 20);
}

TEST_CASE("trace emission mirrors the run") {
  Domain d = Domain::mod(97);
  auto em = slp::emit(chainProgram(), d, std::vector<Value>{3}, slp::SemanticsKind::Trace);
  CHECK(artifactIds(em.graph) ==
        std::set<std::string>{"x", "y", "z", "lit_1", "lit_2"});
  CHECK(em.graph.result == "z");
  CHECK(em.graph.inputs == std::vector<std::string>{"x"});
  CHECK(pg::validate(em.graph, em.interp).ok());
  for (const auto& a : em.graph.artifacts) {
    if (a.id == "x") CHECK(a.value == "3");
    if (a.id == "y") CHECK(a.value == "4");
    if (a.id == "z") CHECK(a.value == "8");
  }
  // the trace generalizes: it recomputes (x+1)*2 at other inputs
  pg::FunctionalSemantics f(em.graph, em.interp);
  REQUIRE(f.arity() == 1);
  CHECK(f(std::vector<Value>{5}) == 12);
  CHECK(f(std::vector<Value>{3}) == 8);
  CHECK(translate::roundTrip(em.graph, em.interp));
}

TEST_CASE("trivial emission disconnects the inputs") {
  Domain d = Domain::mod(97);
  auto em = slp::emit(chainProgram(), d, std::vector<Value>{3}, slp::SemanticsKind::Trivial);
  CHECK(artifactIds(em.graph) == std::set<std::string>{"x", "y", "z"});
  CHECK(em.graph.used.empty());  // const processes take no arguments
  CHECK(pg::validate(em.graph, em.interp).ok());
  pg::FunctionalSemantics f(em.graph, em.interp);
  CHECK(f(std::vector<Value>{5}) == 8);  // stuck at the recorded answer
  CHECK(f(std::vector<Value>{3}) == 8);
}

TEST_CASE("static emission equals trace on straight line programs") {
  Domain d = Domain::mod(97);
  auto tr = slp::emit(chainProgram(), d, std::vector<Value>{3}, slp::SemanticsKind::Trace);
  auto st = slp::emit(chainProgram(), d, std::vector<Value>{3}, slp::SemanticsKind::Static);
  CHECK(pg::writeGraph(st.graph) == pg::writeGraph(tr.graph));
  CHECK(pg::writeInterpretation(st.interp) == pg::writeInterpretation(tr.interp));
}

TEST_CASE("static emission refuses control flow") {
  Domain d = Domain::mod(7);
  CHECK_THROWS_WITH_AS(
      slp::emit(powerProgram(), d, std::vector<Value>{2, 1, 2}, slp::SemanticsKind::Static),
      "static semantics needs a loop free program; found 'repeat' at 4:1", Error);
  auto iffy = slp::parse("input x;\ny := if x then 1 else 0;\nreturn y");
  CHECK_THROWS_WITH_AS(
      slp::emit(iffy, Domain::boolean(), std::vector<Value>{1}, slp::SemanticsKind::Static),
      "static semantics needs a conditional free program; found 'if' at 2:6", Error);
  // trace handles the same program by recording the taken branch
  auto em = slp::emit(iffy, Domain::boolean(), std::vector<Value>{1},
                      slp::SemanticsKind::Trace);
  CHECK(pg::validate(em.graph, em.interp).ok());
  pg::FunctionalSemantics f(em.graph, em.interp);
  CHECK(f(std::vector<Value>{0}) == 1);  // branch choice is baked in
}

TEST_CASE("literal artifacts are shared") {
  auto p = slp::parse("input x;\ny := add(x, 1);\nz := add(y, 1);\nreturn z");
  auto em = slp::emit(p, Domain::mod(7), std::vector<Value>{2}, slp::SemanticsKind::Trace);
  CHECK(artifactIds(em.graph) == std::set<std::string>{"x", "y", "z", "lit_1"});
}

TEST_CASE("returning an input") {
  auto p = slp::parse("input x;\nret := x;\nreturn x");
  auto tr = slp::emit(p, Domain::boolean(), std::vector<Value>{1}, slp::SemanticsKind::Trace);
  CHECK(tr.graph.result == "x");
  CHECK(pg::validate(tr.graph, tr.interp).ok());

  // the trivial reading wants a disconnected result and must dodge the
  // user's own 'ret' name
  auto tv = slp::emit(p, Domain::boolean(), std::vector<Value>{1},
                      slp::SemanticsKind::Trivial);
  CHECK(tv.graph.result == "ret_");
  CHECK(pg::validate(tv.graph, tv.interp).ok());
  pg::FunctionalSemantics f(tv.graph, tv.interp);
  CHECK(f(std::vector<Value>{0}) == 1);
}

TEST_CASE("all three emissions label from the run") {
  Domain d = Domain::mod(7);
  for (auto kind : {slp::SemanticsKind::Trivial, slp::SemanticsKind::Trace}) {
    auto em = slp::emit(powerProgram(), d, std::vector<Value>{2, 1, 2}, kind);
    CHECK(pg::validate(em.graph, em.interp).ok());
    auto ev = pg::evaluateAtLabels(em.graph, em.interp);
    for (const auto& a : em.graph.artifacts)
      CHECK(em.graph.domain.valueName(ev.values.at(a.id)) == a.value);
    CHECK(ev.result == 2);
  }
}

TEST_CASE("semantics names") {
  CHECK(slp::semanticsFromName("trivial") == slp::SemanticsKind::Trivial);
  CHECK(slp::semanticsFromName("trace") == slp::SemanticsKind::Trace);
  CHECK(slp::semanticsFromName("static") == slp::SemanticsKind::Static);
  CHECK_THROWS_AS(slp::semanticsFromName("dynamic"), Error);
}
