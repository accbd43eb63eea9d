#include "provcausal/slp.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace provcausal::slp {

namespace {

struct Token {
  enum class Kind { Ident, Int, Assign, Semi, Comma, LParen, RParen, LBrace, RBrace, End };
  Kind kind = Kind::End;
  std::string text;
  long number = 0;
  int line = 1, col = 1;
};

const std::set<std::string> kKeywords = {"input", "repeat", "return", "if", "then", "else"};
const std::set<std::string> kOps = {"add", "mul", "and", "or", "xor", "not"};

[[noreturn]] void fail(int line, int col, const std::string& msg) {
  throw ParseError("program:" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto bump = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      bump(c);
      ++i;
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        s += text[i];
        bump(text[i]);
        ++i;
      }
      t.kind = Token::Kind::Ident;
      t.text = std::move(s);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string s;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        s += text[i];
        bump(text[i]);
        ++i;
      }
      if (s.size() > 1 && s[0] == '0') fail(t.line, t.col, "number has a leading zero");
      if (s.size() > 9) fail(t.line, t.col, "number too large");
      t.kind = Token::Kind::Int;
      t.number = std::stol(s);
      t.text = std::move(s);
    } else if (c == ':' && i + 1 < text.size() && text[i + 1] == '=') {
      t.kind = Token::Kind::Assign;
      t.text = ":=";
      bump(c);
      bump('=');
      i += 2;
    } else {
      switch (c) {
        case ';': t.kind = Token::Kind::Semi; break;
        case ',': t.kind = Token::Kind::Comma; break;
        case '(': t.kind = Token::Kind::LParen; break;
        case ')': t.kind = Token::Kind::RParen; break;
        case '{': t.kind = Token::Kind::LBrace; break;
        case '}': t.kind = Token::Kind::RBrace; break;
        default: fail(line, col, std::string("stray character '") + c + "'");
      }
      t.text = std::string(1, c);
      bump(c);
      ++i;
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Token::Kind::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program parse() {
    Program p;
    expectKeyword("input");
    p.inputs.push_back(expectName());
    while (at(Token::Kind::Comma)) {
      next();
      p.inputs.push_back(expectName());
    }
    expect(Token::Kind::Semi, "';'");
    std::set<std::string> seen;
    for (const auto& in : p.inputs)
      if (!seen.insert(in).second)
        fail(toks_.front().line, toks_.front().col, "input '" + in + "' declared twice");
    while (!atKeyword("return")) p.body.push_back(parseStmt());
    p.returnLine = cur().line;
    p.returnCol = cur().col;
    expectKeyword("return");
    p.returnVar = expectName();
    if (!at(Token::Kind::End)) fail(cur().line, cur().col, "trailing input after return");
    check(p);
    return p;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;

  const Token& cur() const { return toks_[pos_]; }
  void next() { ++pos_; }
  bool at(Token::Kind k) const { return cur().kind == k; }
  bool atKeyword(const std::string& kw) const {
    return cur().kind == Token::Kind::Ident && cur().text == kw;
  }
  void expect(Token::Kind k, const std::string& what) {
    if (!at(k)) fail(cur().line, cur().col, "expected " + what);
    next();
  }
  void expectKeyword(const std::string& kw) {
    if (!atKeyword(kw)) fail(cur().line, cur().col, "expected '" + kw + "'");
    next();
  }
  std::string expectName() {
    if (!at(Token::Kind::Ident)) fail(cur().line, cur().col, "expected a name");
    if (kKeywords.count(cur().text))
      fail(cur().line, cur().col, "'" + cur().text + "' is a keyword");
    std::string s = cur().text;
    next();
    return s;
  }

  Stmt parseStmt() {
    Stmt s;
    s.line = cur().line;
    s.col = cur().col;
    if (atKeyword("repeat")) {
      next();
      s.kind = Stmt::Kind::Repeat;
      s.count = expectName();
      expect(Token::Kind::LBrace, "'{'");
      while (!at(Token::Kind::RBrace)) s.body.push_back(parseStmt());
      next();
      return s;
    }
    s.kind = Stmt::Kind::Assign;
    s.target = expectName();
    expect(Token::Kind::Assign, "':='");
    s.rhs = parseRhs();
    expect(Token::Kind::Semi, "';'");
    return s;
  }

  Atom parseAtom() {
    Atom a;
    a.line = cur().line;
    a.col = cur().col;
    if (at(Token::Kind::Int)) {
      a.kind = Atom::Kind::Int;
      a.number = cur().number;
      next();
      return a;
    }
    a.kind = Atom::Kind::Ident;
    a.name = expectName();
    return a;
  }

  Rhs parseRhs() {
    Rhs r;
    r.line = cur().line;
    r.col = cur().col;
    if (atKeyword("if")) {
      next();
      r.kind = Rhs::Kind::If;
      r.guard = expectName();
      expectKeyword("then");
      r.thenBranch = std::make_unique<Rhs>(parseRhs());
      expectKeyword("else");
      r.elseBranch = std::make_unique<Rhs>(parseRhs());
      return r;
    }
    if (at(Token::Kind::Ident) && !kKeywords.count(cur().text) &&
        toks_[pos_ + 1].kind == Token::Kind::LParen) {
      if (!kOps.count(cur().text))
        fail(cur().line, cur().col, "unknown operation '" + cur().text + "'");
      r.kind = Rhs::Kind::Call;
      r.op = cur().text;
      next();
      next();  // past '('
      r.args.push_back(parseAtom());
      while (at(Token::Kind::Comma)) {
        next();
        r.args.push_back(parseAtom());
      }
      expect(Token::Kind::RParen, "')'");
      if (r.op == "not" && r.args.size() != 1)
        fail(r.line, r.col, "'not' takes exactly one argument");
      return r;
    }
    r.kind = Rhs::Kind::Single;
    r.atom = parseAtom();
    return r;
  }

  // static checks: use before assign, guards and counts are inputs,
  // assignment never targets an input, reassignment only inside repeat
  void check(const Program& p) {
    std::set<std::string> inputs(p.inputs.begin(), p.inputs.end());
    std::set<std::string> ever;
    std::set<std::string> definite;
    checkStmts(p.body, inputs, definite, ever, false);
    if (!inputs.count(p.returnVar) && !definite.count(p.returnVar))
      fail(p.returnLine, p.returnCol,
           "return variable '" + p.returnVar + "' may be unassigned");
  }

  void checkStmts(const std::vector<Stmt>& body, const std::set<std::string>& inputs,
                  std::set<std::string>& definite, std::set<std::string>& ever,
                  bool inRepeat) {
    for (const auto& s : body) {
      if (s.kind == Stmt::Kind::Repeat) {
        if (!inputs.count(s.count))
          fail(s.line, s.col, "repeat count '" + s.count + "' is not an input");
        // the body may run zero times, so nothing it assigns is definite
        // afterwards; inside, the first iteration's view applies
        std::set<std::string> bodyDefinite = definite;
        checkStmts(s.body, inputs, bodyDefinite, ever, true);
        continue;
      }
      checkRhs(s.rhs, inputs, definite);
      if (inputs.count(s.target))
        fail(s.line, s.col, "cannot assign to input '" + s.target + "'");
      if (ever.count(s.target) && !inRepeat)
        fail(s.line, s.col, "'" + s.target + "' reassigned outside a repeat body");
      ever.insert(s.target);
      definite.insert(s.target);
    }
  }

  void checkRhs(const Rhs& r, const std::set<std::string>& inputs,
                const std::set<std::string>& definite) {
    switch (r.kind) {
      case Rhs::Kind::If:
        if (!inputs.count(r.guard))
          fail(r.line, r.col, "guard '" + r.guard + "' is not an input");
        checkRhs(*r.thenBranch, inputs, definite);
        checkRhs(*r.elseBranch, inputs, definite);
        return;
      case Rhs::Kind::Call:
        for (const auto& a : r.args) checkAtom(a, inputs, definite);
        return;
      case Rhs::Kind::Single:
        checkAtom(r.atom, inputs, definite);
        return;
    }
  }

  void checkAtom(const Atom& a, const std::set<std::string>& inputs,
                 const std::set<std::string>& definite) {
    if (a.kind == Atom::Kind::Int) return;
    if (!inputs.count(a.name) && !definite.count(a.name))
      fail(a.line, a.col, "'" + a.name + "' used before assignment");
  }
};

}  // namespace

Program parse(const std::string& text) { return Parser(lex(text)).parse(); }

Program parseFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

Value evalOp(const std::string& op, std::span<const Value> args, const Domain& d) {
  if (op == "copy") {
    if (args.size() != 1) throw Error("copy takes one argument");
    return args[0];
  }
  if (op == "not") {
    if (d.kind() != DomainKind::Bool) throw Error("'not' needs the boolean domain");
    if (args.size() != 1) throw Error("'not' takes one argument");
    return args[0] ? 0 : 1;
  }
  if (op == "and" || op == "or" || op == "xor") {
    if (d.kind() != DomainKind::Bool) throw Error("'" + op + "' needs the boolean domain");
    if (args.empty()) throw Error("'" + op + "' needs arguments");
    int acc = args[0];
    for (size_t i = 1; i < args.size(); ++i) {
      int b = args[i];
      acc = op == "and" ? (acc && b) : op == "or" ? (acc || b) : (acc != b);
    }
    return static_cast<Value>(acc);
  }
  if (op == "add" || op == "mul") {
    if (d.kind() != DomainKind::Mod)
      throw Error("'" + op + "' needs a modular numeric domain");
    if (args.empty()) throw Error("'" + op + "' needs arguments");
    const int m = d.size();
    long acc = args[0];
    for (size_t i = 1; i < args.size(); ++i)
      acc = op == "add" ? (acc + args[i]) % m : (acc * args[i]) % m;
    return static_cast<Value>(acc);
  }
  throw Error("unknown operation '" + op + "'");
}

namespace {

struct Exec {
  const Program& p;
  const Domain& d;
  std::span<const Value> inputs;
  std::map<std::string, int> inputIndex;

  RunRecord rr;
  std::vector<std::pair<std::string, int>> seq;  // per instruction: base, assignment number
  std::map<std::string, int> counts;             // base -> assignments so far
  std::map<std::string, int> current;            // base -> latest instruction

  Exec(const Program& p_, const Domain& d_, std::span<const Value> in) : p(p_), d(d_), inputs(in) {
    if (in.size() != p.inputs.size())
      throw Error("program needs " + std::to_string(p.inputs.size()) + " inputs, got " +
                  std::to_string(in.size()));
    for (size_t i = 0; i < p.inputs.size(); ++i) {
      if (static_cast<int>(in[i]) >= d.size())
        throw Error("input '" + p.inputs[i] + "' value out of domain range");
      inputIndex[p.inputs[i]] = static_cast<int>(i);
    }
    rr.inputs.assign(in.begin(), in.end());
  }

  Value literalValue(const Atom& a) {
    if (d.kind() == DomainKind::Enum)
      fail(a.line, a.col, "numeric literal in an enumeration domain");
    if (a.number < 0 || a.number >= d.size())
      fail(a.line, a.col, "literal " + std::to_string(a.number) + " outside the domain");
    return static_cast<Value>(a.number);
  }

  std::pair<ArgRef, Value> atomArg(const Atom& a) {
    ArgRef ref;
    if (a.kind == Atom::Kind::Int) {
      ref.kind = ArgRef::Kind::Literal;
      ref.literal = literalValue(a);
      return {ref, ref.literal};
    }
    auto it = inputIndex.find(a.name);
    if (it != inputIndex.end()) {
      ref.kind = ArgRef::Kind::Input;
      ref.index = it->second;
      return {ref, inputs[static_cast<size_t>(it->second)]};
    }
    int instr = current.at(a.name);  // parse checks guarantee presence
    ref.kind = ArgRef::Kind::Instance;
    ref.index = instr;
    return {ref, rr.values[static_cast<size_t>(instr)]};
  }

  const Rhs& resolve(const Rhs& r) {
    if (r.kind != Rhs::Kind::If) return r;
    Value g = inputs[static_cast<size_t>(inputIndex.at(r.guard))];
    return resolve(g != 0 ? *r.thenBranch : *r.elseBranch);
  }

  void assign(const Stmt& s) {
    const Rhs& r = resolve(s.rhs);
    Instruction ins;
    std::vector<Value> argv;
    if (r.kind == Rhs::Kind::Call) {
      ins.op = r.op;
      for (const auto& a : r.args) {
        auto [ref, v] = atomArg(a);
        ins.args.push_back(ref);
        argv.push_back(v);
      }
    } else {
      ins.op = "copy";
      auto [ref, v] = atomArg(r.atom);
      ins.args.push_back(ref);
      argv.push_back(v);
    }
    Value out = evalOp(ins.op, argv, d);
    int idx = static_cast<int>(rr.instructions.size());
    seq.emplace_back(s.target, counts[s.target]++);
    current[s.target] = idx;
    rr.instructions.push_back(std::move(ins));
    rr.values.push_back(out);
  }

  void execStmts(const std::vector<Stmt>& body) {
    for (const auto& s : body) {
      if (s.kind == Stmt::Kind::Assign) {
        assign(s);
        continue;
      }
      if (d.kind() != DomainKind::Mod)
        fail(s.line, s.col, "repeat needs a modular numeric domain");
      int n = inputs[static_cast<size_t>(inputIndex.at(s.count))];
      for (int i = 0; i < n; ++i) execStmts(s.body);
    }
  }

  RunRecord finish() {
    execStmts(p.body);
    for (size_t i = 0; i < rr.instructions.size(); ++i) {
      const auto& [base, k] = seq[i];
      std::string name = counts[base] == 1 ? base : base + "@" + std::to_string(k);
      rr.instructions[i].target = name;
      rr.instanceIndex[name] = static_cast<int>(i);
    }
    auto in = inputIndex.find(p.returnVar);
    if (in != inputIndex.end()) {
      rr.resultVar = p.returnVar;
      rr.result = inputs[static_cast<size_t>(in->second)];
    } else {
      int idx = current.at(p.returnVar);
      rr.resultVar = rr.instructions[static_cast<size_t>(idx)].target;
      rr.result = rr.values[static_cast<size_t>(idx)];
    }
    return std::move(rr);
  }
};

}  // namespace

RunRecord run(const Program& p, const Domain& d, std::span<const Value> inputs) {
  Exec e(p, d, inputs);
  return e.finish();
}

Value stepApply(const RunRecord& rr, int instr, const Domain& d,
                const std::map<int, Value>& instanceOverride) {
  const auto& ins = rr.instructions[static_cast<size_t>(instr)];
  std::vector<Value> argv;
  for (const auto& a : ins.args) {
    switch (a.kind) {
      case ArgRef::Kind::Input:
        argv.push_back(rr.inputs[static_cast<size_t>(a.index)]);
        break;
      case ArgRef::Kind::Literal:
        argv.push_back(a.literal);
        break;
      case ArgRef::Kind::Instance: {
        auto it = instanceOverride.find(a.index);
        argv.push_back(it != instanceOverride.end()
                           ? it->second
                           : rr.values[static_cast<size_t>(a.index)]);
        break;
      }
    }
  }
  return evalOp(ins.op, argv, d);
}

ReferenceCausalFunction::ReferenceCausalFunction(const Program& p, const Domain& d,
                                                std::vector<Value> inputs)
    : d_(d), rr_(run(p, d, inputs)) {}

std::vector<Value> ReferenceCausalFunction::apply(const std::map<std::string, Value>& tau) const {
  std::vector<int> forced(rr_.instructions.size(), -1);
  for (const auto& [name, v] : tau) {
    auto it = rr_.instanceIndex.find(name);
    if (it == rr_.instanceIndex.end())
      throw Error("intervention names '" + name + "', not a variable of this run");
    if (static_cast<int>(v) >= d_.size())
      throw Error("intervention value out of domain range for '" + name + "'");
    forced[static_cast<size_t>(it->second)] = v;
  }
  std::vector<Value> out(rr_.instructions.size(), 0);
  std::map<int, Value> overrides;
  for (size_t i = 0; i < rr_.instructions.size(); ++i) {
    Value v;
    if (forced[i] >= 0) {
      v = static_cast<Value>(forced[i]);
    } else {
      v = stepApply(rr_, static_cast<int>(i), d_, overrides);
    }
    out[i] = v;
    if (v != rr_.values[i]) overrides[static_cast<int>(i)] = v;
  }
  return out;
}

Value ReferenceCausalFunction::resultOf(std::span<const Value> instanceValues) const {
  auto it = rr_.instanceIndex.find(rr_.resultVar);
  if (it == rr_.instanceIndex.end()) return rr_.result;  // program returns an input
  return instanceValues[static_cast<size_t>(it->second)];
}

SemanticsKind semanticsFromName(const std::string& name) {
  if (name == "trivial") return SemanticsKind::Trivial;
  if (name == "trace") return SemanticsKind::Trace;
  if (name == "static") return SemanticsKind::Static;
  throw Error("unknown semantics '" + name + "', expected trivial, trace or static");
}

namespace {

void requireStraightLine(const std::vector<Stmt>& body);

void requireStraightRhs(const Rhs& r, int line, int col) {
  if (r.kind == Rhs::Kind::If)
    throw Error("static semantics needs a conditional free program; found 'if' at " +
                std::to_string(line) + ":" + std::to_string(col));
}

void requireStraightLine(const std::vector<Stmt>& body) {
  for (const auto& s : body) {
    if (s.kind == Stmt::Kind::Repeat)
      throw Error("static semantics needs a loop free program; found 'repeat' at " +
                  std::to_string(s.line) + ":" + std::to_string(s.col));
    requireStraightRhs(s.rhs, s.rhs.line, s.rhs.col);
  }
}

struct Builder {
  Emitted out;
  std::set<std::string> taken;
  std::map<std::string, provgraph::OpSpec> ops;

  explicit Builder(const Domain& dom) { out.graph.domain = dom; }

  std::string freshId(std::string base) {
    while (taken.count(base)) base += "_";
    taken.insert(base);
    return base;
  }

  void addArtifact(const std::string& id, Value v, bool input) {
    out.graph.artifacts.push_back({id, out.graph.domain.valueName(v), input});
  }

  void addOp(const std::string& name, int arity, const std::string& builtin) {
    auto it = ops.find(name);
    if (it != ops.end()) return;
    provgraph::OpSpec spec;
    spec.name = name;
    spec.arity = arity;
    spec.fn = FunctionSpec::fromBuiltin(builtin);
    ops.emplace(name, std::move(spec));
  }

  std::string constOp(Value v) {
    std::string vn = out.graph.domain.valueName(v);
    std::string name = "const_" + vn;
    addOp(name, 0, "const-" + vn);
    return name;
  }

  Emitted finish() {
    for (auto& [name, spec] : ops) out.interp.ops.push_back(std::move(spec));
    return std::move(out);
  }
};

}  // namespace

Emitted emit(const Program& p, const Domain& d, std::span<const Value> inputs,
             SemanticsKind kind) {
  if (kind == SemanticsKind::Static) requireStraightLine(p.body);
  RunRecord rr = run(p, d, inputs);

  Builder b(d);
  for (size_t i = 0; i < p.inputs.size(); ++i) {
    b.taken.insert(p.inputs[i]);
    b.addArtifact(p.inputs[i], rr.inputs[i], true);
    b.out.graph.inputs.push_back(p.inputs[i]);
  }
  for (size_t i = 0; i < rr.instructions.size(); ++i) {
    b.taken.insert(rr.instructions[i].target);
    b.addArtifact(rr.instructions[i].target, rr.values[i], false);
  }

  if (kind == SemanticsKind::Trivial) {
    // every instance regenerated from a constant; no path from the inputs
    for (size_t i = 0; i < rr.instructions.size(); ++i) {
      const auto& target = rr.instructions[i].target;
      std::string op = b.constOp(rr.values[i]);
      std::string pid = b.freshId("p_" + target);
      b.out.graph.processes.push_back({pid, op});
      b.out.graph.generated.push_back({target, pid});
    }
    if (rr.instanceIndex.count(rr.resultVar)) {
      b.out.graph.result = rr.resultVar;
    } else {
      // the program returns an input; the constant result still needs a
      // node of its own to stay disconnected
      std::string rid = b.freshId("ret");
      b.addArtifact(rid, rr.result, false);
      std::string pid = b.freshId("p_" + rid);
      b.out.graph.processes.push_back({pid, b.constOp(rr.result)});
      b.out.graph.generated.push_back({rid, pid});
      b.out.graph.result = rid;
    }
    return b.finish();
  }

  // trace and static share the builder: one process per executed instance
  std::map<Value, std::string> litIds;
  auto litArtifact = [&](Value v) -> std::string {
    auto it = litIds.find(v);
    if (it != litIds.end()) return it->second;
    std::string vn = d.valueName(v);
    std::string aid = b.freshId("lit_" + vn);
    b.addArtifact(aid, v, false);
    std::string pid = b.freshId("p_lit_" + vn);
    b.out.graph.processes.push_back({pid, b.constOp(v)});
    b.out.graph.generated.push_back({aid, pid});
    litIds.emplace(v, aid);
    return aid;
  };

  for (size_t i = 0; i < rr.instructions.size(); ++i) {
    const auto& ins = rr.instructions[i];
    std::string opName;
    if (ins.op == "copy") {
      opName = "copy";
      b.addOp("copy", 1, "copy");
    } else if (ins.op == "not") {
      opName = "not";
      b.addOp("not", 1, "not");
    } else {
      const int n = static_cast<int>(ins.args.size());
      opName = ins.op + std::to_string(n);
      b.addOp(opName, n, ins.op == "add" ? "add-mod" : ins.op == "mul" ? "mul-mod" : ins.op);
    }
    std::string pid = b.freshId("p_" + ins.target);
    b.out.graph.processes.push_back({pid, opName});
    int port = 1;
    for (const auto& a : ins.args) {
      std::string aid;
      switch (a.kind) {
        case ArgRef::Kind::Input: aid = p.inputs[static_cast<size_t>(a.index)]; break;
        case ArgRef::Kind::Instance:
          aid = rr.instructions[static_cast<size_t>(a.index)].target;
          break;
        case ArgRef::Kind::Literal: aid = litArtifact(a.literal); break;
      }
      b.out.graph.used.push_back({pid, aid, port++});
    }
    b.out.graph.generated.push_back({ins.target, pid});
  }
  b.out.graph.result = rr.resultVar;  // an instance, or the returned input
  return b.finish();
}

}  // namespace provcausal::slp
