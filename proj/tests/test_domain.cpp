#include <doctest.h>

#include <json.hpp>

#include "provcausal/domain.hpp"
#include "provcausal/funcspec.hpp"

using namespace provcausal;

TEST_CASE("boolean domain") {
  Domain d = Domain::boolean();
  CHECK(d.kind() == DomainKind::Bool);
  CHECK(d.size() == 2);
  CHECK(d.zero() == 0);
  CHECK(d.valueName(0) == "0");
  CHECK(d.valueName(1) == "1");
  CHECK(d.parseValue("0") == Value{0});
  CHECK(d.parseValue("1") == Value{1});
  CHECK(!d.parseValue("2").has_value());
  CHECK(!d.parseValue("").has_value());
  CHECK(!d.parseValue("true").has_value());
  CHECK(!d.parseValue("01").has_value());
}

TEST_CASE("modular domain") {
  Domain d = Domain::mod(97);
  CHECK(d.size() == 97);
  CHECK(d.parseValue("96") == Value{96});
  CHECK(!d.parseValue("97").has_value());
  CHECK(!d.parseValue("-1").has_value());
  CHECK(d.valueName(42) == "42");
  CHECK_THROWS_AS(Domain::mod(1), Error);
  CHECK_THROWS_AS(Domain::mod(257), Error);
  CHECK(Domain::mod(256).size() == 256);
}

TEST_CASE("enum domain") {
  Domain d = Domain::enumeration({"lo", "mid", "hi"});
  CHECK(d.size() == 3);
  CHECK(d.zero() == 0);
  CHECK(d.valueName(2) == "hi");
  CHECK(d.parseValue("mid") == Value{1});
  CHECK(!d.parseValue("0").has_value());
  CHECK_THROWS_AS(Domain::enumeration({}), Error);
  CHECK_THROWS_AS(Domain::enumeration({"a", "a"}), Error);
  CHECK_THROWS_AS(Domain::enumeration({""}), Error);
}

TEST_CASE("requireValue names the location") {
  Domain d = Domain::boolean();
  CHECK(d.requireValue("1", "here") == Value{1});
  CHECK_THROWS_WITH_AS(d.requireValue("7", "artifact a1"),
                       "artifact a1: value '7' not in domain", Error);
}

TEST_CASE("domain json round trip") {
  for (const Domain& d : {Domain::boolean(), Domain::mod(13),
                          Domain::enumeration({"x", "y"})}) {
    Domain back = Domain::fromJson(d.toJson(), "t");
    CHECK(back == d);
  }
  CHECK_THROWS_AS(Domain::fromJson(nlohmann::json{{"kind", "float"}}, "t"), ParseError);
  CHECK_THROWS_AS(Domain::fromJson(nlohmann::json{{"kind", "bool"}, {"m", 2}}, "t"),
                  ParseError);
}

TEST_CASE("builtins compile to the expected tables") {
  Domain b = Domain::boolean();
  auto apply = [&](const char* name, int arity, std::vector<Value> args) {
    auto fn = CompiledFn::compile(FunctionSpec::fromBuiltin(name), b, arity, "t");
    return fn.apply(args);
  };
  CHECK(apply("and", 3, {1, 1, 1}) == 1);
  CHECK(apply("and", 3, {1, 0, 1}) == 0);
  CHECK(apply("or", 2, {0, 0}) == 0);
  CHECK(apply("or", 2, {0, 1}) == 1);
  CHECK(apply("xor", 2, {1, 1}) == 0);
  CHECK(apply("xor", 3, {1, 1, 1}) == 1);
  CHECK(apply("not", 1, {0}) == 1);
  CHECK(apply("copy", 1, {1}) == 1);
  CHECK(apply("const-0", 2, {1, 1}) == 0);

  Domain m5 = Domain::mod(5);
  auto applyM = [&](const char* name, int arity, std::vector<Value> args) {
    auto fn = CompiledFn::compile(FunctionSpec::fromBuiltin(name), m5, arity, "t");
    return fn.apply(args);
  };
  CHECK(applyM("add-mod", 2, {3, 4}) == 2);
  CHECK(applyM("mul-mod", 2, {3, 4}) == 2);
  CHECK(applyM("add-mod", 1, {3}) == 3);
  CHECK(applyM("const-4", 1, {0}) == 4);

  // wrong domain pairings refuse
  CHECK_THROWS_AS(CompiledFn::compile(FunctionSpec::fromBuiltin("and"), m5, 2, "t"), Error);
  CHECK_THROWS_AS(CompiledFn::compile(FunctionSpec::fromBuiltin("add-mod"), b, 2, "t"), Error);
  CHECK_THROWS_AS(CompiledFn::compile(FunctionSpec::fromBuiltin("not"), b, 2, "t"), Error);
  CHECK_THROWS_AS(CompiledFn::compile(FunctionSpec::fromBuiltin("nand"), b, 2, "t"), Error);
}

TEST_CASE("table functions: parse, apply, gaps and contradictions refuse") {
  Domain b = Domain::boolean();
  FunctionSpec fn;
  fn.table = {{"0", "0", "0"}, {"0", "1", "1"}, {"1", "0", "1"}, {"1", "1", "0"}};
  auto c = CompiledFn::compile(fn, b, 2, "t");
  CHECK(c.apply(std::vector<Value>{1, 0}) == 1);
  CHECK(c.apply(std::vector<Value>{1, 1}) == 0);

  FunctionSpec gap;
  gap.table = {{"0", "1"}};
  CHECK_THROWS_AS(CompiledFn::compile(gap, b, 1, "t"), Error);

  FunctionSpec dup;
  dup.table = {{"0", "1"}, {"0", "0"}};
  CHECK_THROWS_AS(CompiledFn::compile(dup, b, 1, "t"), Error);

  FunctionSpec wrongWidth;
  wrongWidth.table = {{"0", "0", "1"}, {"1", "1", "0"}};
  CHECK_THROWS_AS(CompiledFn::compile(wrongWidth, b, 1, "t"), Error);
}

TEST_CASE("constantInArg spots ignored positions") {
  Domain b = Domain::boolean();
  // projection to the second argument
  FunctionSpec fn;
  fn.table = {{"0", "0", "0"}, {"0", "1", "1"}, {"1", "0", "0"}, {"1", "1", "1"}};
  auto c = CompiledFn::compile(fn, b, 2, "t");
  CHECK(c.constantInArg(0, b));
  CHECK(!c.constantInArg(1, b));
}

TEST_CASE("toTableSpec inverts compile") {
  Domain b = Domain::boolean();
  auto fn = CompiledFn::compile(FunctionSpec::fromBuiltin("xor"), b, 2, "t");
  FunctionSpec spec = fn.toTableSpec(b);
  CHECK(spec.isTable());
  auto back = CompiledFn::compile(spec, b, 2, "t");
  CHECK(back == fn);
  CHECK(spec.table.size() == 4);
  // rows enumerate arguments first slot most significant
  CHECK(spec.table[2] == std::vector<std::string>{"1", "0", "1"});
}
