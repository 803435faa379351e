// Copyright 2026 The BDCI Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bdci/condition.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iterator>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "bdci/error.h"
#include "bdci/text.h"

namespace bdci {

const char* ShapeName(Shape shape) {
  switch (shape) {
    case Shape::kEqConst: return "EqConst";
    case Shape::kGeConst: return "GeConst";
    case Shape::kLeConst: return "LeConst";
    case Shape::kGtConst: return "GtConst";
    case Shape::kLtConst: return "LtConst";
    case Shape::kNotEqConst: return "NotEqConst";
    case Shape::kOneOf: return "OneOf";
    case Shape::kVarEq: return "VarEq";
    case Shape::kVarLt: return "VarLt";
    case Shape::kVarLe: return "VarLe";
    case Shape::kVarGt: return "VarGt";
    case Shape::kVarGe: return "VarGe";
    case Shape::kNotNull: return "NotNull";
  }
  return "?";
}

bool IsBinaryShape(Shape shape) {
  switch (shape) {
    case Shape::kVarEq:
    case Shape::kVarLt:
    case Shape::kVarLe:
    case Shape::kVarGt:
    case Shape::kVarGe:
      return true;
    default:
      return false;
  }
}

namespace {

Shape Mirror(Shape shape) {
  switch (shape) {
    case Shape::kVarLt: return Shape::kVarGt;
    case Shape::kVarGt: return Shape::kVarLt;
    case Shape::kVarLe: return Shape::kVarGe;
    case Shape::kVarGe: return Shape::kVarLe;
    default: return shape;
  }
}

const char* Operator(Shape shape) {
  switch (shape) {
    case Shape::kEqConst:
    case Shape::kVarEq:
      return "=";
    case Shape::kGeConst:
    case Shape::kVarGe:
      return ">=";
    case Shape::kLeConst:
    case Shape::kVarLe:
      return "<=";
    case Shape::kGtConst:
    case Shape::kVarGt:
      return ">";
    case Shape::kLtConst:
    case Shape::kVarLt:
      return "<";
    default:
      return "";
  }
}

}  // namespace

long double Constant::value() const {
  if (is_float()) return static_cast<long double>(real());
  return static_cast<long double>(integer());
}

std::string Constant::ToString() const {
  if (!is_float()) return std::to_string(integer());
  std::string text = FormatShortest(real());
  if (text.find_first_of(".eEn") == std::string::npos) text += ".0";
  return text;
}

bool Constant::operator<(const Constant& other) const {
  long double a = value();
  long double b = other.value();
  if (a != b) return a < b;
  return !is_float() && other.is_float();
}

Atom Atom::Unary(Shape shape, std::string var, Constant constant) {
  Atom atom;
  atom.shape = shape;
  atom.lhs = std::move(var);
  atom.constants.push_back(constant);
  return atom;
}

Atom Atom::OneOf(std::string var, std::vector<Constant> values) {
  Atom atom;
  atom.shape = Shape::kOneOf;
  atom.lhs = std::move(var);
  atom.constants = std::move(values);
  std::sort(atom.constants.begin(), atom.constants.end());
  atom.constants.erase(
      std::unique(atom.constants.begin(), atom.constants.end()),
      atom.constants.end());
  return atom;
}

Atom Atom::Binary(Shape shape, std::string lhs, std::string rhs) {
  Atom atom;
  atom.shape = shape;
  atom.lhs = std::move(lhs);
  atom.rhs = std::move(rhs);
  return atom;
}

Atom Atom::NotNull(std::string var) {
  Atom atom;
  atom.shape = Shape::kNotNull;
  atom.lhs = std::move(var);
  return atom;
}

Atom Atom::Candidate(Shape shape, std::string lhs, std::string rhs) {
  Atom atom;
  atom.shape = shape;
  atom.lhs = std::move(lhs);
  atom.rhs = std::move(rhs);
  return atom;
}

bool Atom::bound() const {
  switch (shape) {
    case Shape::kOneOf:
      return constants.size() >= 2;
    case Shape::kNotNull:
      return true;
    default:
      return binary() || constants.size() == 1;
  }
}

std::vector<std::string> Atom::Variables() const {
  if (binary()) return {lhs, rhs};
  return {lhs};
}

bool Atom::Mentions(std::string_view var) const {
  return lhs == var || (binary() && rhs == var);
}

Atom Atom::Canonical() const {
  Atom atom = *this;
  if (atom.shape == Shape::kNotEqConst && atom.constants.size() == 1 &&
      !atom.constants[0].is_float() && atom.constants[0].integer() == 0) {
    return NotNull(atom.lhs);
  }
  if (atom.shape == Shape::kOneOf) {
    atom = OneOf(atom.lhs, atom.constants);
    if (atom.constants.size() == 1) atom.shape = Shape::kEqConst;
    return atom;
  }
  if (atom.binary()) {
    bool swap = false;
    if (atom.lhs == kReturnVariable) {
      swap = false;
    } else if (atom.rhs == kReturnVariable) {
      swap = true;
    } else {
      swap = atom.rhs < atom.lhs;
    }
    if (swap) {
      std::swap(atom.lhs, atom.rhs);
      atom.shape = Mirror(atom.shape);
    }
  }
  return atom;
}

std::string Atom::ToString() const {
  std::string out;
  switch (shape) {
    case Shape::kNotNull:
      return "(not (= " + lhs + " 0))";
    case Shape::kNotEqConst:
      return "(not (= " + lhs + " " +
             (constants.empty() ? "?" : constants[0].ToString()) + "))";
    case Shape::kOneOf:
      out = "(or";
      for (const Constant& c : constants) {
        out += " (= " + lhs + " " + c.ToString() + ")";
      }
      return out + ")";
    default:
      break;
  }
  out = std::string("(") + Operator(shape) + " " + lhs + " ";
  if (binary()) {
    out += rhs;
  } else {
    out += constants.empty() ? "?" : constants[0].ToString();
  }
  return out + ")";
}

bool AtomLess(const Atom& a, const Atom& b) {
  if (a.lhs != b.lhs) return a.lhs < b.lhs;
  if (a.rhs != b.rhs) return a.rhs < b.rhs;
  if (a.shape != b.shape) return a.shape < b.shape;
  return std::lexicographical_compare(a.constants.begin(), a.constants.end(),
                                      b.constants.begin(), b.constants.end());
}

namespace {

std::string FormatNumber(long double value) {
  if (std::nearbyint(value) == value && std::fabs(value) < 1e18L) {
    return std::to_string(static_cast<long long>(value));
  }
  return FormatShortest(static_cast<double>(value));
}

bool Holds(Shape shape, long double x, long double y) {
  switch (shape) {
    case Shape::kEqConst:
    case Shape::kVarEq:
      return x == y;
    case Shape::kGeConst:
    case Shape::kVarGe:
      return x >= y;
    case Shape::kLeConst:
    case Shape::kVarLe:
      return x <= y;
    case Shape::kGtConst:
    case Shape::kVarGt:
      return x > y;
    case Shape::kLtConst:
    case Shape::kVarLt:
      return x < y;
    case Shape::kNotEqConst:
      return x != y;
    default:
      return false;
  }
}

}  // namespace

std::string FormatAssignment(const Assignment& assignment) {
  std::string out;
  for (const auto& [name, value] : assignment) {
    if (!out.empty()) out += ", ";
    out += name + "=" + FormatNumber(value);
  }
  return out;
}

bool Evaluate(const Atom& atom, const Assignment& assignment) {
  auto lookup = [&](const std::string& name) {
    auto it = assignment.find(name);
    if (it == assignment.end()) {
      throw Error(ErrorCode::kInput, "no value for variable " + name);
    }
    return it->second;
  };
  long double x = lookup(atom.lhs);
  switch (atom.shape) {
    case Shape::kNotNull:
      return x != 0;
    case Shape::kOneOf:
      return std::any_of(atom.constants.begin(), atom.constants.end(),
                         [&](const Constant& c) { return c.value() == x; });
    default:
      break;
  }
  if (atom.binary()) return Holds(atom.shape, x, lookup(atom.rhs));
  if (atom.constants.empty()) {
    throw Error(ErrorCode::kInput, "atom has no bound constant");
  }
  return Holds(atom.shape, x, atom.constants[0].value());
}

Condition::Condition(std::vector<Atom> atoms) {
  for (Atom& atom : atoms) atom = atom.Canonical();
  std::sort(atoms.begin(), atoms.end(), AtomLess);
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  atoms_ = std::move(atoms);
}

std::vector<std::string> Condition::Variables() const {
  std::set<std::string> names;
  for (const Atom& atom : atoms_) {
    for (std::string& name : atom.Variables()) names.insert(std::move(name));
  }
  return {names.begin(), names.end()};
}

bool Condition::Evaluate(const Assignment& assignment) const {
  return std::all_of(atoms_.begin(), atoms_.end(), [&](const Atom& atom) {
    return bdci::Evaluate(atom, assignment);
  });
}

std::string Serialize(const Condition& condition) {
  const auto& atoms = condition.atoms();
  if (atoms.empty()) return "true";
  std::string out = atoms[0].ToString();
  for (std::size_t i = 1; i < atoms.size(); ++i) {
    out = "(and " + out + " " + atoms[i].ToString() + ")";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
  enum Kind { kOpen, kClose, kSymbol, kEnd } kind;
  std::string_view text;
  std::size_t offset;
};

bool LooksNumeric(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i < s.size() && s[i] == '.') ++i;
  return i < s.size() && s[i] >= '0' && s[i] <= '9';
}

class ConditionParser {
 public:
  explicit ConditionParser(std::string_view text) : text_(text) { Lex(); }

  Condition Parse() {
    std::vector<Atom> atoms;
    ParseOperand(atoms);
    if (Peek().kind != Token::kEnd) Fail(Peek(), "trailing input");
    return Condition(std::move(atoms));
  }

 private:
  void Lex() {
    std::size_t i = 0;
    while (i < text_.size()) {
      char c = text_[i];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++i;
      } else if (c == '(' || c == ')') {
        tokens_.push_back(
            {c == '(' ? Token::kOpen : Token::kClose, text_.substr(i, 1), i});
        ++i;
      } else {
        std::size_t start = i;
        while (i < text_.size() && text_[i] != '(' && text_[i] != ')' &&
               text_[i] != ' ' && text_[i] != '\t' && text_[i] != '\n' &&
               text_[i] != '\r') {
          ++i;
        }
        tokens_.push_back(
            {Token::kSymbol, text_.substr(start, i - start), start});
      }
    }
    tokens_.push_back({Token::kEnd, {}, text_.size()});
  }

  [[noreturn]] void Fail(const Token& at, const std::string& message) const {
    std::string shown = at.kind == Token::kEnd ? std::string("end of input")
                                               : "'" + std::string(at.text) +
                                                     "'";
    throw ParseError(message + " at " + shown, 1, at.offset + 1);
  }

  const Token& Peek() const { return tokens_[pos_]; }
  const Token& Next() {
    const Token& token = tokens_[pos_];
    if (token.kind != Token::kEnd) ++pos_;
    return token;
  }

  void Expect(Token::Kind kind, const char* what) {
    if (Peek().kind != kind) Fail(Peek(), std::string("expected ") + what);
    Next();
  }

  // A condition operand: `true`, an atom, or a nested `and`.
  void ParseOperand(std::vector<Atom>& atoms) {
    const Token& token = Next();
    if (token.kind == Token::kSymbol && token.text == "true") return;
    if (token.kind != Token::kOpen) Fail(token, "expected '(' or 'true'");
    const Token& op = Next();
    if (op.kind != Token::kSymbol) Fail(op, "expected operator");
    if (op.text == "and") {
      int operands = 0;
      while (Peek().kind != Token::kClose) {
        if (Peek().kind == Token::kEnd) Fail(Peek(), "unterminated 'and'");
        ParseOperand(atoms);
        ++operands;
      }
      if (operands < 2) Fail(Peek(), "'and' needs at least two operands");
      Next();
      return;
    }
    atoms.push_back(ParseAtomBody(op));
  }

  std::string Variable() {
    const Token& token = Next();
    if (token.kind != Token::kSymbol || LooksNumeric(token.text)) {
      Fail(token, "expected variable name");
    }
    return std::string(token.text);
  }

  Constant Number() {
    const Token& token = Next();
    if (token.kind != Token::kSymbol || !LooksNumeric(token.text)) {
      Fail(token, "expected numeric constant");
    }
    return ToConstant(token);
  }

  Constant ToConstant(const Token& token) const {
    std::string_view s = token.text;
    if (!s.empty() && s[0] == '+') s.remove_prefix(1);
    const char* end = s.data() + s.size();
    if (s.find_first_of(".eE") == std::string_view::npos) {
      std::int64_t value = 0;
      auto [ptr, ec] = std::from_chars(s.data(), end, value);
      if (ec == std::errc::result_out_of_range) {
        Fail(token, "integer constant out of range");
      }
      if (ec != std::errc() || ptr != end) Fail(token, "malformed constant");
      return Constant::Integer(value);
    }
    double value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
      Fail(token, "malformed float constant");
    }
    return Constant::Real(value);
  }

  // `(= v k)` after the opening parenthesis has been consumed.
  std::pair<std::string, Constant> Equality() {
    const Token& op = Next();
    if (op.kind != Token::kSymbol || op.text != "=") Fail(op, "expected '='");
    std::string var = Variable();
    Constant value = Number();
    Expect(Token::kClose, "')'");
    return {std::move(var), value};
  }

  Atom ParseAtomBody(const Token& op) {
    static const std::pair<std::string_view, Shape> kComparisons[] = {
        {"=", Shape::kEqConst}, {">=", Shape::kGeConst},
        {"<=", Shape::kLeConst}, {">", Shape::kGtConst},
        {"<", Shape::kLtConst},
    };
    static const Shape kVarShapes[] = {Shape::kVarEq, Shape::kVarGe,
                                       Shape::kVarLe, Shape::kVarGt,
                                       Shape::kVarLt};
    for (std::size_t i = 0; i < std::size(kComparisons); ++i) {
      if (op.text != kComparisons[i].first) continue;
      std::string lhs = Variable();
      const Token& rhs = Peek();
      if (rhs.kind != Token::kSymbol) Fail(rhs, "expected operand");
      Atom atom;
      if (LooksNumeric(rhs.text)) {
        atom = Atom::Unary(kComparisons[i].second, lhs, Number());
      } else {
        atom = Atom::Binary(kVarShapes[i], lhs, Variable());
      }
      Expect(Token::kClose, "')' (comparison takes two operands)");
      return atom;
    }
    if (op.text == "not") {
      Expect(Token::kOpen, "'(' after 'not'");
      auto [var, value] = Equality();
      Expect(Token::kClose, "')' (not takes one operand)");
      return Atom::Unary(Shape::kNotEqConst, var, value);
    }
    if (op.text == "or") {
      std::string var;
      std::vector<Constant> values;
      while (Peek().kind == Token::kOpen) {
        Next();
        const Token& where = Peek();
        auto [name, value] = Equality();
        if (!var.empty() && name != var) {
          Fail(where, "'or' must range over a single variable");
        }
        var = name;
        values.push_back(value);
      }
      if (Peek().kind != Token::kClose) {
        Fail(Peek(), "non-flat 'or': operands must be equalities");
      }
      if (values.size() < 2) Fail(Peek(), "'or' needs at least two operands");
      Next();
      return Atom::OneOf(var, values);
    }
    Fail(op, "unknown operator");
  }

  std::string_view text_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Condition ParseCondition(std::string_view text) {
  return ConditionParser(text).Parse();
}

// ---------------------------------------------------------------------------
// Decision procedure

const char* VerdictName(EquivVerdict::Result result) {
  switch (result) {
    case EquivVerdict::Result::kEquivalent: return "EQUIVALENT";
    case EquivVerdict::Result::kNotEquivalent: return "NOT_EQUIVALENT";
    case EquivVerdict::Result::kApproximate: return "APPROXIMATE";
  }
  return "?";
}

namespace {

// Variables linked (transitively) by binary atoms, evaluated independently.
struct Component {
  std::vector<std::string> vars;     // sorted
  std::vector<std::vector<long double>> probes;  // per var, constants first
  std::vector<VariableGrid> grids;
};

struct CompiledAtom {
  Shape shape;
  std::size_t a = 0;
  std::size_t b = 0;
  std::vector<long double> constants;

  bool Eval(const std::vector<long double>& point) const {
    long double x = point[a];
    switch (shape) {
      case Shape::kNotNull:
        return x != 0;
      case Shape::kOneOf:
        return std::find(constants.begin(), constants.end(), x) !=
               constants.end();
      default:
        break;
    }
    if (IsBinaryShape(shape)) return Holds(shape, x, point[b]);
    return Holds(shape, x, constants[0]);
  }
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t Find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void Join(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

std::vector<Constant> AtomConstants(const Atom& atom) {
  if (atom.shape == Shape::kNotNull) return {Constant::Integer(0)};
  return atom.constants;
}

std::vector<Component> BuildComponents(const Condition& a, const Condition& b,
                                       const DecisionOptions& options,
                                       bool enforce_var_limit) {
  std::set<std::string> names;
  for (const Condition* c : {&a, &b}) {
    for (std::string& v : c->Variables()) names.insert(std::move(v));
  }
  std::vector<std::string> vars(names.begin(), names.end());
  auto index_of = [&](const std::string& v) {
    return static_cast<std::size_t>(
        std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
  };

  UnionFind uf(vars.size());
  std::vector<std::vector<Constant>> constants(vars.size());
  for (const Condition* c : {&a, &b}) {
    for (const Atom& atom : c->atoms()) {
      std::size_t i = index_of(atom.lhs);
      if (atom.binary()) {
        uf.Join(i, index_of(atom.rhs));
      } else {
        for (const Constant& k : AtomConstants(atom)) {
          constants[i].push_back(k);
        }
      }
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < vars.size(); ++i) groups[uf.Find(i)].push_back(i);

  std::vector<Component> components;
  for (const auto& [root, members] : groups) {
    Component comp;
    bool has_int = false;
    bool has_float = false;
    bool hinted_float = false;
    bool hinted_int = false;
    bool all_small = true;  // every member declared bool or ptr
    std::set<long double> pool;
    for (std::size_t i : members) {
      comp.vars.push_back(vars[i]);
      for (const Constant& k : constants[i]) {
        (k.is_float() ? has_float : has_int) = true;
        pool.insert(k.value());
      }
      auto kind = options.kinds.find(vars[i]);
      if (kind == options.kinds.end()) {
        all_small = false;
        continue;
      }
      if (kind->second == ValueKind::kFloat) {
        hinted_float = true;
      } else {
        hinted_int = true;
      }
      if (kind->second != ValueKind::kBool && kind->second != ValueKind::kPtr) {
        all_small = false;
      }
    }
    if ((has_int && has_float) || (hinted_int && (hinted_float || has_float))) {
      std::string list = Join(comp.vars, ", ");
      throw Error(ErrorCode::kType,
                  "variables {" + list +
                      "} are compared against both integer and float values");
    }
    if (enforce_var_limit && comp.vars.size() > options.max_vars) {
      throw Error(ErrorCode::kBudget,
                  "too many related variables (" +
                      std::to_string(comp.vars.size()) + " > " +
                      std::to_string(options.max_vars) + ")");
    }
    bool is_float = has_float || hinted_float;
    const long double k = static_cast<long double>(comp.vars.size());

    std::set<long double> values;
    if (all_small && comp.vars.size() == 1) {
      values = {0, 1};
    } else if (pool.empty()) {
      for (long double d = -k; d <= k; d += 1) values.insert(d);
    } else if (!is_float) {
      for (long double c : pool) {
        for (long double d = -k; d <= k; d += 1) values.insert(c + d);
      }
      values.insert(*pool.begin() - (k + 1));
      values.insert(*pool.rbegin() + (k + 1));
    } else {
      std::vector<long double> sorted(pool.begin(), pool.end());
      values.insert(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        for (long double j = 1; j <= k; j += 1) {
          values.insert(sorted[i] + (sorted[i + 1] - sorted[i]) * j / (k + 1));
        }
      }
      for (long double j = 1; j <= k; j += 1) {
        values.insert(sorted.front() - j);
        values.insert(sorted.back() + j);
      }
    }

    // Probe order: mentioned constants first, then everything else. The
    // first witness found is then a boundary value whenever one exists.
    std::vector<long double> probes;
    for (long double v : values) {
      if (pool.count(v)) probes.push_back(v);
    }
    for (long double v : values) {
      if (!pool.count(v)) probes.push_back(v);
    }
    for (const std::string& name : comp.vars) {
      comp.grids.push_back(
          {name, is_float, std::vector<long double>(values.begin(),
                                                    values.end())});
      comp.probes.push_back(probes);
    }
    components.push_back(std::move(comp));
  }
  return components;
}

std::vector<CompiledAtom> CompileFor(const Condition& c,
                                     const Component& comp) {
  std::vector<CompiledAtom> out;
  auto index_of = [&](const std::string& v) -> std::optional<std::size_t> {
    auto it = std::lower_bound(comp.vars.begin(), comp.vars.end(), v);
    if (it == comp.vars.end() || *it != v) return std::nullopt;
    return static_cast<std::size_t>(it - comp.vars.begin());
  };
  for (const Atom& atom : c.atoms()) {
    auto a = index_of(atom.lhs);
    if (!a) continue;
    CompiledAtom compiled{atom.shape, *a, 0, {}};
    if (atom.binary()) compiled.b = *index_of(atom.rhs);
    for (const Constant& k : atom.constants) {
      compiled.constants.push_back(k.value());
    }
    out.push_back(std::move(compiled));
  }
  return out;
}

bool EvalAll(const std::vector<CompiledAtom>& atoms,
             const std::vector<long double>& point) {
  for (const CompiledAtom& atom : atoms) {
    if (!atom.Eval(point)) return false;
  }
  return true;
}

struct ComponentScan {
  std::optional<std::vector<long double>> sat_a;
  std::optional<std::vector<long double>> sat_b;
  std::optional<std::vector<long double>> a_not_b;
  std::optional<std::vector<long double>> b_not_a;
};

ComponentScan Scan(const Component& comp, const Condition& a,
                   const Condition& b) {
  std::vector<CompiledAtom> ca = CompileFor(a, comp);
  std::vector<CompiledAtom> cb = CompileFor(b, comp);
  ComponentScan scan;
  const std::size_t n = comp.vars.size();
  std::vector<std::size_t> idx(n, 0);
  std::vector<long double> point(n);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) point[i] = comp.probes[i][idx[i]];
    bool ea = EvalAll(ca, point);
    bool eb = EvalAll(cb, point);
    if (ea && !scan.sat_a) scan.sat_a = point;
    if (eb && !scan.sat_b) scan.sat_b = point;
    if (ea && !eb && !scan.a_not_b) scan.a_not_b = point;
    if (eb && !ea && !scan.b_not_a) scan.b_not_a = point;
    if (scan.sat_a && scan.sat_b && scan.a_not_b && scan.b_not_a) break;
    // Odometer with the last variable varying fastest.
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++idx[i] < comp.probes[i].size()) break;
      idx[i] = 0;
      if (i == 0) return scan;
    }
  }
  return scan;
}

std::uint64_t GridPoints(const std::vector<Component>& components) {
  std::uint64_t total = 0;
  for (const Component& comp : components) {
    std::uint64_t product = 1;
    for (const auto& probes : comp.probes) {
      if (product > (std::uint64_t{1} << 62) / (probes.size() + 1)) {
        return std::numeric_limits<std::uint64_t>::max();
      }
      product *= probes.size();
    }
    total += product;
  }
  return total;
}

// Builds components unless the question exceeds the configured budget.
std::optional<std::vector<Component>> Prepare(const Condition& a,
                                              const Condition& b,
                                              const DecisionOptions& options) {
  try {
    std::vector<Component> components = BuildComponents(a, b, options, true);
    if (GridPoints(components) > options.grid_budget) return std::nullopt;
    return components;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kBudget) return std::nullopt;
    throw;
  }
}

void Place(Assignment& out, const Component& comp,
           const std::vector<long double>& point) {
  for (std::size_t i = 0; i < comp.vars.size(); ++i) {
    out[comp.vars[i]] = point[i];
  }
}

bool AtomSubset(const Condition& small, const Condition& big) {
  return std::includes(big.atoms().begin(), big.atoms().end(),
                       small.atoms().begin(), small.atoms().end(), AtomLess);
}

// Exact fallback for integer-only questions whose grid is too large. The
// fragment is a set of difference constraints with holes: per-variable
// intervals, membership sets, excluded points, and x<y / x<=y edges. Least
// lower bounds reach a fixpoint that is a solution iff one exists.
class IntegerSystem {
 public:
  explicit IntegerSystem(std::vector<std::string> vars)
      : vars_(std::move(vars)), domains_(vars_.size()) {}

  void Add(const Atom& atom) {
    std::size_t x = Index(atom.lhs);
    Domain& d = domains_[x];
    auto c = [&] { return atom.constants.at(0).value(); };
    switch (atom.shape) {
      case Shape::kEqConst: Restrict(d, {c()}); break;
      case Shape::kGeConst: d.lo = std::max(d.lo, c()); break;
      case Shape::kGtConst: d.lo = std::max(d.lo, c() + 1); break;
      case Shape::kLeConst: d.hi = std::min(d.hi, c()); break;
      case Shape::kLtConst: d.hi = std::min(d.hi, c() - 1); break;
      case Shape::kNotEqConst: d.excluded.insert(c()); break;
      case Shape::kNotNull: d.excluded.insert(0); break;
      case Shape::kOneOf: {
        std::set<long double> values;
        for (const Constant& k : atom.constants) values.insert(k.value());
        Restrict(d, values);
        break;
      }
      case Shape::kVarEq:
        edges_.push_back({x, Index(atom.rhs), false});
        edges_.push_back({Index(atom.rhs), x, false});
        break;
      case Shape::kVarLt: edges_.push_back({x, Index(atom.rhs), true}); break;
      case Shape::kVarLe: edges_.push_back({x, Index(atom.rhs), false}); break;
      case Shape::kVarGt: edges_.push_back({Index(atom.rhs), x, true}); break;
      case Shape::kVarGe: edges_.push_back({Index(atom.rhs), x, false}); break;
    }
    for (const Constant& k : atom.constants) constants_.insert(k.value());
    if (atom.shape == Shape::kNotNull) constants_.insert(0);
  }

  std::optional<Assignment> Solve() const {
    const std::size_t n = vars_.size();
    // A strict edge inside a cycle can never be satisfied.
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) reach[i][i] = true;
    for (const Edge& e : edges_) reach[e.from][e.to] = true;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!reach[i][k]) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (reach[k][j]) reach[i][j] = true;
        }
      }
    }
    for (const Edge& e : edges_) {
      if (e.strict && reach[e.to][e.from]) return std::nullopt;
    }
    // Any solution can be compressed into [floor, ceiling].
    long double span = static_cast<long double>(n) + 2;
    long double floor = constants_.empty() ? -span : *constants_.begin() - span;
    long double ceiling =
        constants_.empty() ? span : *constants_.rbegin() + span;

    std::vector<long double> lb(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto v = NextAllowed(i, std::max(domains_[i].lo, floor), ceiling);
      if (!v) return std::nullopt;
      lb[i] = *v;
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Edge& e : edges_) {
        long double need = lb[e.from] + (e.strict ? 1 : 0);
        if (lb[e.to] >= need) continue;
        auto v = NextAllowed(e.to, need, ceiling);
        if (!v) return std::nullopt;
        lb[e.to] = *v;
        changed = true;
      }
    }
    Assignment out;
    for (std::size_t i = 0; i < n; ++i) out[vars_[i]] = lb[i];
    return out;
  }

 private:
  struct Domain {
    long double lo = -std::numeric_limits<long double>::infinity();
    long double hi = std::numeric_limits<long double>::infinity();
    std::optional<std::set<long double>> allowed;
    std::set<long double> excluded;
  };
  struct Edge {
    std::size_t from;
    std::size_t to;
    bool strict;
  };

  std::size_t Index(const std::string& var) const {
    return static_cast<std::size_t>(
        std::lower_bound(vars_.begin(), vars_.end(), var) - vars_.begin());
  }

  static void Restrict(Domain& d, const std::set<long double>& values) {
    if (!d.allowed) {
      d.allowed = values;
      return;
    }
    std::set<long double> both;
    std::set_intersection(d.allowed->begin(), d.allowed->end(), values.begin(),
                          values.end(), std::inserter(both, both.begin()));
    d.allowed = std::move(both);
  }

  std::optional<long double> NextAllowed(std::size_t i, long double from,
                                         long double ceiling) const {
    const Domain& d = domains_[i];
    long double hi = std::min(d.hi, ceiling);
    if (d.allowed) {
      for (auto it = d.allowed->lower_bound(from); it != d.allowed->end();
           ++it) {
        if (*it > hi) break;
        if (!d.excluded.count(*it)) return *it;
      }
      return std::nullopt;
    }
    long double w = std::ceil(from);
    while (d.excluded.count(w)) w += 1;
    if (w > hi) return std::nullopt;
    return w;
  }

  std::vector<std::string> vars_;
  std::vector<Domain> domains_;
  std::vector<Edge> edges_;
  std::set<long double> constants_;
};

// Atoms whose disjunction is the negation of `atom`; each inner vector is
// one conjunctive case.
std::vector<std::vector<Atom>> Negate(const Atom& atom) {
  auto unary = [&](Shape shape) {
    return std::vector<Atom>{Atom::Unary(shape, atom.lhs, atom.constants[0])};
  };
  auto binary = [&](Shape shape) {
    return std::vector<Atom>{Atom::Binary(shape, atom.lhs, atom.rhs)};
  };
  switch (atom.shape) {
    case Shape::kEqConst: return {unary(Shape::kLtConst), unary(Shape::kGtConst)};
    case Shape::kGeConst: return {unary(Shape::kLtConst)};
    case Shape::kGtConst: return {unary(Shape::kLeConst)};
    case Shape::kLeConst: return {unary(Shape::kGtConst)};
    case Shape::kLtConst: return {unary(Shape::kGeConst)};
    case Shape::kNotEqConst: return {unary(Shape::kEqConst)};
    case Shape::kNotNull:
      return {{Atom::Unary(Shape::kEqConst, atom.lhs, Constant::Integer(0))}};
    case Shape::kOneOf: {
      std::vector<Atom> none;
      for (const Constant& k : atom.constants) {
        none.push_back(Atom::Unary(Shape::kNotEqConst, atom.lhs, k));
      }
      return {none};
    }
    case Shape::kVarEq: return {binary(Shape::kVarLt), binary(Shape::kVarGt)};
    case Shape::kVarLt: return {binary(Shape::kVarGe)};
    case Shape::kVarLe: return {binary(Shape::kVarGt)};
    case Shape::kVarGt: return {binary(Shape::kVarLe)};
    case Shape::kVarGe: return {binary(Shape::kVarLt)};
  }
  return {};
}

bool IntegerOnly(const Condition& a, const Condition& b,
                 const DecisionOptions& options) {
  for (const Condition* c : {&a, &b}) {
    for (const Atom& atom : c->atoms()) {
      for (const Constant& k : atom.constants) {
        if (k.is_float()) return false;
      }
      for (const std::string& v : atom.Variables()) {
        auto kind = options.kinds.find(v);
        if (kind != options.kinds.end() && kind->second == ValueKind::kFloat) {
          return false;
        }
      }
    }
  }
  return true;
}

std::optional<Assignment> SolveConjunction(const std::vector<std::string>& vars,
                                           const std::vector<Atom>& atoms) {
  IntegerSystem system(vars);
  for (const Atom& atom : atoms) system.Add(atom);
  return system.Solve();
}

std::optional<EntailVerdict> EntailsByPropagation(
    const Condition& premise, const Condition& conclusion,
    const DecisionOptions& options) {
  if (!IntegerOnly(premise, conclusion, options)) return std::nullopt;
  std::set<std::string> names;
  for (const Condition* c : {&premise, &conclusion}) {
    for (std::string& v : c->Variables()) names.insert(std::move(v));
  }
  std::vector<std::string> vars(names.begin(), names.end());
  EntailVerdict verdict;
  if (!SolveConjunction(vars, premise.atoms())) {
    verdict.holds = true;
    return verdict;
  }
  for (const Atom& atom : conclusion.atoms()) {
    for (const std::vector<Atom>& branch : Negate(atom)) {
      std::vector<Atom> atoms = premise.atoms();
      atoms.insert(atoms.end(), branch.begin(), branch.end());
      if (auto solution = SolveConjunction(vars, atoms)) {
        verdict.counterexample = std::move(solution);
        return verdict;
      }
    }
  }
  verdict.holds = true;
  return verdict;
}

}  // namespace

std::vector<VariableGrid> Grid(const Condition& a, const Condition& b,
                               const DecisionOptions& options) {
  std::vector<VariableGrid> grids;
  for (Component& comp : BuildComponents(a, b, options, true)) {
    for (VariableGrid& grid : comp.grids) grids.push_back(std::move(grid));
  }
  std::sort(grids.begin(), grids.end(),
            [](const VariableGrid& x, const VariableGrid& y) {
              return x.name < y.name;
            });
  return grids;
}

EquivVerdict Equivalent(const Condition& a, const Condition& b,
                        const DecisionOptions& options) {
  EquivVerdict verdict;
  std::optional<std::vector<Component>> components = Prepare(a, b, options);
  if (!components) {
    auto forward = EntailsByPropagation(a, b, options);
    auto backward = EntailsByPropagation(b, a, options);
    if (!forward || !backward) {
      verdict.result = EquivVerdict::Result::kApproximate;
      verdict.syntactically_equal = a == b;
    } else if (!forward->holds || !backward->holds) {
      verdict.result = EquivVerdict::Result::kNotEquivalent;
      verdict.witness = !forward->holds ? forward->counterexample
                                        : backward->counterexample;
    }
    return verdict;
  }
  std::vector<ComponentScan> scans;
  for (const Component& comp : *components) {
    scans.push_back(Scan(comp, a, b));
  }
  bool sat_a = std::all_of(scans.begin(), scans.end(),
                           [](const ComponentScan& s) { return s.sat_a; });
  bool sat_b = std::all_of(scans.begin(), scans.end(),
                           [](const ComponentScan& s) { return s.sat_b; });
  if (!sat_a && !sat_b) return verdict;

  // Completes a witness: `where` picks the distinguishing point in one
  // component, every other component takes a point satisfying `side`.
  auto witness = [&](std::size_t where, const std::vector<long double>& point,
                     bool side_a) {
    Assignment out;
    for (std::size_t i = 0; i < components->size(); ++i) {
      const auto& fill = side_a ? scans[i].sat_a : scans[i].sat_b;
      Place(out, (*components)[i], i == where ? point : *fill);
    }
    verdict.result = EquivVerdict::Result::kNotEquivalent;
    verdict.witness = std::move(out);
    return verdict;
  };

  if (sat_a != sat_b) {
    bool side_a = sat_a;
    const auto& first = side_a ? scans[0].sat_a : scans[0].sat_b;
    return witness(0, *first, side_a);
  }
  for (std::size_t i = 0; i < scans.size(); ++i) {
    if (scans[i].a_not_b) return witness(i, *scans[i].a_not_b, true);
    if (scans[i].b_not_a) return witness(i, *scans[i].b_not_a, false);
  }
  return verdict;
}

EntailVerdict CheckEntails(const Condition& premise,
                           const Condition& conclusion,
                           const DecisionOptions& options) {
  EntailVerdict verdict;
  std::optional<std::vector<Component>> components =
      Prepare(premise, conclusion, options);
  if (!components) {
    if (auto exact = EntailsByPropagation(premise, conclusion, options)) {
      return *exact;
    }
    verdict.approximate = true;
    verdict.holds = AtomSubset(conclusion, premise);
    return verdict;
  }
  std::vector<ComponentScan> scans;
  for (const Component& comp : *components) {
    scans.push_back(Scan(comp, premise, conclusion));
    if (!scans.back().sat_a) {
      verdict.holds = true;  // unsatisfiable premise
      return verdict;
    }
  }
  for (std::size_t i = 0; i < scans.size(); ++i) {
    if (!scans[i].a_not_b) continue;
    Assignment out;
    for (std::size_t j = 0; j < scans.size(); ++j) {
      Place(out, (*components)[j], i == j ? *scans[i].a_not_b : *scans[j].sat_a);
    }
    verdict.counterexample = std::move(out);
    return verdict;
  }
  verdict.holds = true;
  return verdict;
}

}  // namespace bdci
