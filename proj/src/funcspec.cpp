#include "provcausal/funcspec.hpp"

#include "provcausal/json_util.hpp"

#include <cstdint>

namespace provcausal {

namespace {

constexpr std::int64_t kMaxTableSize = 1 << 22;

std::int64_t powChecked(int base, int exp, const std::string& where) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    r *= base;
    if (r > kMaxTableSize)
      throw Error(where + ": function table over " + std::to_string(exp) +
                  " arguments would be too large");
  }
  return r;
}

bool startsWith(const std::string& s, const char* p) {
  return s.rfind(p, 0) == 0;
}

}  // namespace

FunctionSpec FunctionSpec::fromBuiltin(std::string name) {
  FunctionSpec f;
  f.builtin = std::move(name);
  return f;
}

FunctionSpec FunctionSpec::constant(const std::string& valueName) {
  return fromBuiltin("const-" + valueName);
}

nlohmann::json FunctionSpec::toJson() const {
  nlohmann::json j;
  if (isTable())
    j["table"] = table;
  else
    j["builtin"] = builtin;
  return j;
}

FunctionSpec FunctionSpec::fromJson(const nlohmann::json& j, const std::string& where) {
  jutil::requireObject(j, where);
  if (j.contains("builtin")) {
    jutil::checkKeys(j, {"builtin"}, where);
    return fromBuiltin(jutil::getString(j, "builtin", where));
  }
  if (j.contains("table")) {
    jutil::checkKeys(j, {"table"}, where);
    FunctionSpec f;
    const auto& rows = jutil::getArray(j, "table", where);
    for (const auto& row : rows) {
      if (!row.is_array()) throw ParseError(where + ": table rows must be arrays");
      std::vector<std::string> r;
      for (const auto& cell : row) {
        if (!cell.is_string())
          throw ParseError(where + ": table cells must be value strings");
        r.push_back(cell.get<std::string>());
      }
      f.table.push_back(std::move(r));
    }
    return f;
  }
  throw ParseError(where + ": function spec needs 'builtin' or 'table'");
}

bool isKnownBuiltin(const std::string& name) {
  if (name == "and" || name == "or" || name == "not" || name == "xor" ||
      name == "add-mod" || name == "mul-mod" || name == "copy")
    return true;
  return startsWith(name, "const-");
}

CompiledFn CompiledFn::compile(const FunctionSpec& spec, const Domain& d, int arity,
                               const std::string& where) {
  if (arity < 0) throw Error(where + ": negative arity");
  const int m = d.size();
  const std::int64_t rows = powChecked(m, arity, where);

  CompiledFn fn;
  fn.arity_ = arity;
  fn.domainSize_ = m;
  fn.table_.assign(static_cast<size_t>(rows), Value{0});

  if (!spec.isTable()) {
    const std::string& b = spec.builtin;
    const bool isConst = startsWith(b, "const-");
    Value constVal = 0;
    if (isConst) {
      constVal = d.requireValue(b.substr(6), where + ": builtin " + b);
    } else if (b == "and" || b == "or" || b == "not" || b == "xor") {
      if (d.kind() != DomainKind::Bool)
        throw Error(where + ": builtin '" + b + "' needs a bool domain");
      if (b == "not" && arity != 1)
        throw Error(where + ": builtin 'not' needs arity 1");
      if (b != "not" && arity < 1)
        throw Error(where + ": builtin '" + b + "' needs arity >= 1");
    } else if (b == "add-mod" || b == "mul-mod") {
      if (d.kind() != DomainKind::Mod)
        throw Error(where + ": builtin '" + b + "' needs a mod domain");
      if (arity < 1) throw Error(where + ": builtin '" + b + "' needs arity >= 1");
    } else if (b == "copy") {
      if (arity != 1) throw Error(where + ": builtin 'copy' needs arity 1");
    } else {
      throw Error(where + ": unknown builtin '" + b + "'");
    }

    std::vector<Value> args(static_cast<size_t>(arity), 0);
    for (std::int64_t idx = 0; idx < rows; ++idx) {
      // decode mixed radix, first argument most significant
      std::int64_t rem = idx;
      for (int a = arity - 1; a >= 0; --a) {
        args[a] = static_cast<Value>(rem % m);
        rem /= m;
      }
      int out;
      if (isConst) {
        out = constVal;
      } else if (b == "copy") {
        out = args[0];
      } else if (b == "and") {
        out = 1;
        for (Value v : args) out &= v;
      } else if (b == "or") {
        out = 0;
        for (Value v : args) out |= v;
      } else if (b == "not") {
        out = 1 - args[0];
      } else if (b == "xor") {
        out = 0;
        for (Value v : args) out ^= v;
      } else if (b == "add-mod") {
        out = 0;
        for (Value v : args) out = (out + v) % m;
      } else {  // mul-mod
        out = 1;
        for (Value v : args) out = (out * v) % m;
      }
      fn.table_[static_cast<size_t>(idx)] = static_cast<Value>(out);
    }
    return fn;
  }

  // explicit table: every argument tuple exactly once
  if (static_cast<std::int64_t>(spec.table.size()) != rows)
    throw Error(where + ": table has " + std::to_string(spec.table.size()) +
                " rows, expected " + std::to_string(rows));
  std::vector<bool> seen(static_cast<size_t>(rows), false);
  for (const auto& row : spec.table) {
    if (static_cast<int>(row.size()) != arity + 1)
      throw Error(where + ": table row needs " + std::to_string(arity + 1) + " cells");
    std::int64_t idx = 0;
    for (int a = 0; a < arity; ++a)
      idx = idx * m + d.requireValue(row[a], where + ": table argument");
    if (seen[static_cast<size_t>(idx)])
      throw Error(where + ": duplicate table row for the same arguments");
    seen[static_cast<size_t>(idx)] = true;
    fn.table_[static_cast<size_t>(idx)] =
        d.requireValue(row[arity], where + ": table output");
  }
  return fn;
}

Value CompiledFn::apply(std::span<const Value> args) const {
  std::int64_t idx = 0;
  for (int a = 0; a < arity_; ++a) idx = idx * domainSize_ + args[a];
  return table_[static_cast<size_t>(idx)];
}

bool CompiledFn::constantInArg(int argIdx, const Domain& d) const {
  // stride of argIdx in the mixed radix layout
  std::int64_t stride = 1;
  for (int a = arity_ - 1; a > argIdx; --a) stride *= d.size();
  const std::int64_t block = stride * d.size();
  const std::int64_t total = static_cast<std::int64_t>(table_.size());
  for (std::int64_t base = 0; base < total; base += block)
    for (std::int64_t off = 0; off < stride; ++off)
      for (int v = 1; v < d.size(); ++v)
        if (table_[static_cast<size_t>(base + off)] !=
            table_[static_cast<size_t>(base + off + v * stride)])
          return false;
  return true;
}

FunctionSpec CompiledFn::toTableSpec(const Domain& d) const {
  FunctionSpec spec;
  const int m = d.size();
  std::vector<Value> args(static_cast<size_t>(arity_), 0);
  const std::int64_t rows = static_cast<std::int64_t>(table_.size());
  for (std::int64_t idx = 0; idx < rows; ++idx) {
    std::int64_t rem = idx;
    for (int a = arity_ - 1; a >= 0; --a) {
      args[a] = static_cast<Value>(rem % m);
      rem /= m;
    }
    std::vector<std::string> row;
    row.reserve(static_cast<size_t>(arity_) + 1);
    for (int a = 0; a < arity_; ++a) row.push_back(d.valueName(args[a]));
    row.push_back(d.valueName(table_[static_cast<size_t>(idx)]));
    spec.table.push_back(std::move(row));
  }
  return spec;
}

}  // namespace provcausal
