#include "provcausal/domain.hpp"

#include "provcausal/json_util.hpp"

#include <algorithm>
#include <set>

namespace provcausal {

Domain Domain::boolean() {
  Domain d;
  d.kind_ = DomainKind::Bool;
  d.size_ = 2;
  return d;
}

Domain Domain::mod(int m) {
  if (m < 2) throw Error("modular domain needs m >= 2, got " + std::to_string(m));
  if (m > 256) throw Error("modular domain too large (max 256): " + std::to_string(m));
  Domain d;
  d.kind_ = DomainKind::Mod;
  d.size_ = m;
  return d;
}

Domain Domain::enumeration(std::vector<std::string> symbols) {
  if (symbols.empty()) throw Error("enum domain needs at least one symbol");
  if (symbols.size() > 256) throw Error("enum domain too large (max 256)");
  std::set<std::string> seen;
  for (const auto& s : symbols) {
    if (s.empty()) throw Error("enum domain symbol must be nonempty");
    if (!seen.insert(s).second) throw Error("duplicate enum symbol: " + s);
  }
  Domain d;
  d.kind_ = DomainKind::Enum;
  d.size_ = static_cast<int>(symbols.size());
  d.symbols_ = std::move(symbols);
  return d;
}

std::string Domain::valueName(Value v) const {
  if (static_cast<int>(v) >= size_) throw Error("value index out of domain range");
  if (kind_ == DomainKind::Enum) return symbols_[v];
  return std::to_string(static_cast<int>(v));
}

std::optional<Value> Domain::parseValue(std::string_view s) const {
  if (kind_ == DomainKind::Enum) {
    for (int i = 0; i < size_; ++i)
      if (symbols_[i] == s) return static_cast<Value>(i);
    return std::nullopt;
  }
  // bool and mod share decimal notation; bool is just 0/1
  if (s.empty() || s.size() > 3) return std::nullopt;
  int n = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    n = n * 10 + (c - '0');
  }
  if (s.size() > 1 && s[0] == '0') return std::nullopt;  // no leading zeros
  if (n >= size_) return std::nullopt;
  return static_cast<Value>(n);
}

Value Domain::requireValue(std::string_view s, const std::string& where) const {
  auto v = parseValue(s);
  if (!v) throw Error(where + ": value '" + std::string(s) + "' not in domain");
  return *v;
}

bool Domain::operator==(const Domain& o) const {
  return kind_ == o.kind_ && size_ == o.size_ && symbols_ == o.symbols_;
}

nlohmann::json Domain::toJson() const {
  nlohmann::json j;
  switch (kind_) {
    case DomainKind::Bool:
      j["kind"] = "bool";
      break;
    case DomainKind::Mod:
      j["kind"] = "mod";
      j["m"] = size_;
      break;
    case DomainKind::Enum:
      j["kind"] = "enum";
      j["values"] = symbols_;
      break;
  }
  return j;
}

Domain Domain::fromJson(const nlohmann::json& j, const std::string& where) {
  jutil::requireObject(j, where);
  std::string kind = jutil::getString(j, "kind", where);
  if (kind == "bool") {
    jutil::checkKeys(j, {"kind"}, where);
    return boolean();
  }
  if (kind == "mod") {
    jutil::checkKeys(j, {"kind", "m"}, where);
    return mod(jutil::getInt(j, "m", where));
  }
  if (kind == "enum") {
    jutil::checkKeys(j, {"kind", "values"}, where);
    const auto& vals = jutil::getArray(j, "values", where);
    std::vector<std::string> syms;
    for (const auto& v : vals) {
      if (!v.is_string()) throw ParseError(where + ": enum values must be strings");
      syms.push_back(v.get<std::string>());
    }
    return enumeration(std::move(syms));
  }
  throw ParseError(where + ": unknown domain kind '" + kind + "'");
}

}  // namespace provcausal
