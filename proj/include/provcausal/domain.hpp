#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace provcausal {

// values are indices into the active domain; kept small on purpose,
// every search in this library enumerates value tuples exhaustively
using Value = std::uint8_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// syntax or schema problem in an input file, carries a location hint
class ParseError : public Error {
 public:
  using Error::Error;
};

// an exhaustive check would exceed its configured budget
class BudgetError : public Error {
 public:
  using Error::Error;
};

enum class DomainKind { Bool, Mod, Enum };

class Domain {
 public:
  Domain() : kind_(DomainKind::Bool), size_(2) {}

  static Domain boolean();
  static Domain mod(int m);  // m >= 2
  static Domain enumeration(std::vector<std::string> symbols);

  DomainKind kind() const { return kind_; }
  int size() const { return size_; }

  std::string valueName(Value v) const;
  std::optional<Value> parseValue(std::string_view s) const;
  // like parseValue but throws with context on failure
  Value requireValue(std::string_view s, const std::string& where) const;

  // first value of the domain, used as the "no fault" default
  Value zero() const { return 0; }

  bool operator==(const Domain& o) const;
  bool operator!=(const Domain& o) const { return !(*this == o); }

  nlohmann::json toJson() const;
  static Domain fromJson(const nlohmann::json& j, const std::string& where);

 private:
  DomainKind kind_;
  int size_;
  std::vector<std::string> symbols_;  // Enum only
};

}  // namespace provcausal
