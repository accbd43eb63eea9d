#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "provcausal/domain.hpp"

namespace provcausal {

// serializable description of a finite function over a domain.
// either a named builtin or an explicit table whose rows list the
// argument values followed by the output value.
struct FunctionSpec {
  std::string builtin;  // empty when the table form is used
  std::vector<std::vector<std::string>> table;

  bool isTable() const { return builtin.empty(); }

  static FunctionSpec fromBuiltin(std::string name);
  // constant function written as the builtin "const-<value>"
  static FunctionSpec constant(const std::string& valueName);

  nlohmann::json toJson() const;
  static FunctionSpec fromJson(const nlohmann::json& j, const std::string& where);
};

// dense evaluable form of a FunctionSpec, bound to a domain and arity.
// builtins are expanded to tables so application is one lookup.
class CompiledFn {
 public:
  static CompiledFn compile(const FunctionSpec& spec, const Domain& d, int arity,
                            const std::string& where);

  int arity() const { return arity_; }
  Value apply(std::span<const Value> args) const;

  // true when the output never depends on argument position argIdx
  bool constantInArg(int argIdx, const Domain& d) const;

  // explicit row form, used when a combined function has to be serialized
  FunctionSpec toTableSpec(const Domain& d) const;

  bool operator==(const CompiledFn& o) const {
    return arity_ == o.arity_ && domainSize_ == o.domainSize_ && table_ == o.table_;
  }

 private:
  int arity_ = 0;
  int domainSize_ = 0;
  std::vector<Value> table_;
};

// builtin names understood by CompiledFn::compile:
//   and, or, not, xor            (bool domains)
//   add-mod, mul-mod             (mod domains)
//   const-<value>, copy          (any domain)
bool isKnownBuiltin(const std::string& name);

}  // namespace provcausal
