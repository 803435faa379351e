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

// Conjunctions of atomic properties over program variables, their canonical
// s-expression text form, and a small-model decision procedure for
// entailment and equivalence.
//
// The atom vocabulary is deliberately small: comparisons of one variable
// against constants, a flat disjunction of equalities, and order relations
// between two variables. Over that fragment the truth value of a condition
// can only change at (or next to) the constants it mentions, so evaluating
// both sides on a finite boundary grid decides the question exactly.

#ifndef BDCI_CONDITION_H_
#define BDCI_CONDITION_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bdci/trace.h"

namespace bdci {

// Declaration order is the canonical shape rank.
enum class Shape {
  kEqConst,
  kGeConst,
  kLeConst,
  kGtConst,
  kLtConst,
  kNotEqConst,
  kOneOf,
  kVarEq,
  kVarLt,
  kVarLe,
  kVarGt,
  kVarGe,
  kNotNull,
};

const char* ShapeName(Shape shape);
bool IsBinaryShape(Shape shape);

// An integer or floating point literal. Floats always render with a '.' or
// an exponent so the text form keeps the distinction.
class Constant {
 public:
  static Constant Integer(std::int64_t value) { return Constant(value); }
  static Constant Real(double value) { return Constant(value); }

  bool is_float() const { return std::holds_alternative<double>(value_); }
  std::int64_t integer() const { return std::get<std::int64_t>(value_); }
  double real() const { return std::get<double>(value_); }
  long double value() const;

  std::string ToString() const;

  bool operator==(const Constant&) const = default;
  bool operator<(const Constant& other) const;

 private:
  explicit Constant(std::variant<std::int64_t, double> value)
      : value_(value) {}

  std::variant<std::int64_t, double> value_;
};

struct Atom {
  Shape shape = Shape::kEqConst;
  std::string lhs;
  std::string rhs;  // second variable, binary shapes only
  // One constant for the *Const shapes, 2-3 sorted values for kOneOf, none
  // otherwise. Template candidates leave it empty until the miner binds it.
  std::vector<Constant> constants;

  static Atom Unary(Shape shape, std::string var, Constant constant);
  static Atom OneOf(std::string var, std::vector<Constant> values);
  static Atom Binary(Shape shape, std::string lhs, std::string rhs);
  static Atom NotNull(std::string var);
  // Unbound template instance.
  static Atom Candidate(Shape shape, std::string lhs, std::string rhs = {});

  bool binary() const { return IsBinaryShape(shape); }
  bool bound() const;
  std::vector<std::string> Variables() const;
  bool Mentions(std::string_view var) const;

  // Canonical orientation: `return` is always the left operand of a binary
  // atom, otherwise the lexicographically smaller name is. `v != 0` is
  // always represented as kNotNull, since both print as `(not (= v 0))`.
  Atom Canonical() const;

  std::string ToString() const;

  bool operator==(const Atom&) const = default;
};

// Canonical atom order: variable names, then shape rank, then constants.
bool AtomLess(const Atom& a, const Atom& b);

using Assignment = std::map<std::string, long double, std::less<>>;

std::string FormatAssignment(const Assignment& assignment);

bool Evaluate(const Atom& atom, const Assignment& assignment);

// A canonical, duplicate-free conjunction. The empty condition is `true`.
class Condition {
 public:
  Condition() = default;
  explicit Condition(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }
  std::size_t size() const { return atoms_.size(); }

  std::vector<std::string> Variables() const;
  bool Evaluate(const Assignment& assignment) const;

  bool operator==(const Condition&) const = default;

 private:
  std::vector<Atom> atoms_;
};

// `true`, a single atom, or left-folded binary `and`s.
std::string Serialize(const Condition& condition);

// Accepts anything Serialize() emits, with arbitrary whitespace between
// tokens. Throws ParseError with the byte offset of the offending token.
Condition ParseCondition(std::string_view text);

struct DecisionOptions {
  std::size_t max_vars = 8;
  std::uint64_t grid_budget = 1'000'000;
  // Optional declared kinds. bool and ptr variables are then restricted to
  // {0, 1}, and float variables without constants get a float grid.
  std::map<std::string, ValueKind, std::less<>> kinds;
};

struct VariableGrid {
  std::string name;
  bool is_float = false;
  std::vector<long double> values;  // ascending
};

// Candidate values per variable for deciding questions about `a` and `b`.
// Constants are pooled over groups of variables linked by binary atoms;
// each pooled constant contributes itself and its neighbours, and the pool
// gets outer sentinels. Throws Error{kType} when a variable (group) mixes
// integer and float constants and Error{kBudget} when a group has more than
// max_vars variables.
std::vector<VariableGrid> Grid(const Condition& a, const Condition& b,
                               const DecisionOptions& options = {});

struct EquivVerdict {
  enum class Result { kEquivalent, kNotEquivalent, kApproximate };

  Result result = Result::kEquivalent;
  std::optional<Assignment> witness;  // set iff kNotEquivalent
  // kApproximate only: whether the canonical atom sets are identical.
  bool syntactically_equal = false;

  // Verdicts callers should treat as "the conditions differ".
  bool differs() const {
    return result == Result::kNotEquivalent ||
           (result == Result::kApproximate && !syntactically_equal);
  }
};

const char* VerdictName(EquivVerdict::Result result);

EquivVerdict Equivalent(const Condition& a, const Condition& b,
                        const DecisionOptions& options = {});

struct EntailVerdict {
  bool holds = false;
  bool approximate = false;
  std::optional<Assignment> counterexample;
};

EntailVerdict CheckEntails(const Condition& premise,
                           const Condition& conclusion,
                           const DecisionOptions& options = {});

inline bool Entails(const Condition& premise, const Condition& conclusion,
                    const DecisionOptions& options = {}) {
  return CheckEntails(premise, conclusion, options).holds;
}

}  // namespace bdci

#endif  // BDCI_CONDITION_H_
