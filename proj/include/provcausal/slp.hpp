#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "provcausal/domain.hpp"
#include "provcausal/provgraph.hpp"

namespace provcausal::slp {

// straight line programs: input decl, assignments with optional input
// guarded conditionals, input bounded repeat loops, one return variable.
// guards and loop counts are input variables only; that restriction is
// what keeps the unrolled structure a function of the inputs alone.

struct Atom {
  enum class Kind { Ident, Int };
  Kind kind = Kind::Ident;
  std::string name;   // Ident
  long number = 0;    // Int
  int line = 0, col = 0;
};

struct Rhs {
  enum class Kind { Call, Single, If };
  Kind kind = Kind::Single;
  // Call
  std::string op;
  std::vector<Atom> args;
  // Single
  Atom atom;
  // If
  std::string guard;
  std::unique_ptr<Rhs> thenBranch, elseBranch;
  int line = 0, col = 0;
};

struct Stmt {
  enum class Kind { Assign, Repeat };
  Kind kind = Kind::Assign;
  // Assign
  std::string target;
  Rhs rhs;
  // Repeat
  std::string count;
  std::vector<Stmt> body;
  int line = 0, col = 0;
};

struct Program {
  std::vector<std::string> inputs;
  std::vector<Stmt> body;
  std::string returnVar;
  int returnLine = 0, returnCol = 0;
};

// syntax plus static checks: reserved words, known operations, guards and
// counts naming inputs, definite assignment (loop bodies may run zero
// times, so their assignments don't count afterwards)
Program parse(const std::string& text);
Program parseFile(const std::string& path);

// one executed assignment instance. args refer to inputs by position,
// earlier instances by index, or literal values.
struct ArgRef {
  enum class Kind { Input, Instance, Literal };
  Kind kind = Kind::Input;
  int index = 0;  // input position or instance index
  Value literal = 0;
};

struct Instruction {
  std::string target;        // versioned name: plain when assigned once, v@k else
  std::string op;            // add, mul, and, or, xor, not, copy
  std::vector<ArgRef> args;
};

struct RunRecord {
  std::vector<Value> inputs;             // by program input order
  std::vector<Instruction> instructions; // execution order
  std::vector<Value> values;             // per instruction
  std::map<std::string, int> instanceIndex;
  std::string resultVar;                 // versioned, or an input name
  Value result = 0;
};

// the operation semantics all of this module uses: add/mul modulo |D| on
// numeric domains, and/or/xor/not on booleans, copy anywhere
Value evalOp(const std::string& op, std::span<const Value> args, const Domain& d);

RunRecord run(const Program& p, const Domain& d, std::span<const Value> inputs);

// one instruction recomputed with chosen instances overridden; the
// structural approximation checks build on this
Value stepApply(const RunRecord& rr, int instr, const Domain& d,
                const std::map<int, Value>& instanceOverride);

// the run as a family of functions: apply(tau) re-executes with each
// named instance forced at its assignment, yielding the full valuation
// over the run's instances. tau must name instances of this run.
class ReferenceCausalFunction {
 public:
  ReferenceCausalFunction(const Program& p, const Domain& d, std::vector<Value> inputs);

  const RunRecord& record() const { return rr_; }
  std::vector<Value> apply(const std::map<std::string, Value>& tau) const;
  Value resultOf(std::span<const Value> instanceValues) const;

 private:
  const Domain d_;
  RunRecord rr_;
};

enum class SemanticsKind { Trivial, Trace, Static };

SemanticsKind semanticsFromName(const std::string& name);  // trivial|trace|static

struct Emitted {
  provgraph::ProvGraph graph;
  provgraph::Interpretation interp;
};

// provenance graph for one run. trace mirrors the executed instances as
// processes; static is the same builder but refuses loops and
// conditionals anywhere, making the structure input independent; trivial
// regenerates every instance from a constant, disconnected from the
// inputs. all three label nodes from the run, so each evaluates back to
// the run's values at these inputs.
Emitted emit(const Program& p, const Domain& d, std::span<const Value> inputs,
             SemanticsKind kind);

}  // namespace provcausal::slp
