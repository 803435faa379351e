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

#include "bdci/miner.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <utility>

#include "bdci/error.h"
#include "bdci/text.h"

namespace bdci {

namespace {

constexpr std::size_t kMaxOneOf = 3;

bool IsNumeric(ValueKind kind) {
  return kind == ValueKind::kInt || kind == ValueKind::kUint ||
         kind == ValueKind::kFloat;
}

// int and uint compare with each other; floats only with floats.
bool Comparable(ValueKind a, ValueKind b) {
  return IsNumeric(a) && IsNumeric(b) &&
         (a == ValueKind::kFloat) == (b == ValueKind::kFloat);
}

std::optional<Constant> ToConstant(long double value, bool is_float) {
  if (is_float) return Constant::Real(static_cast<double>(value));
  if (value < static_cast<long double>(std::numeric_limits<std::int64_t>::min()) ||
      value > static_cast<long double>(std::numeric_limits<std::int64_t>::max())) {
    return std::nullopt;
  }
  return Constant::Integer(static_cast<std::int64_t>(value));
}

// Trailing decimal zeros; zero itself counts as the roundest value.
int Roundness(const Constant& c) {
  if (c.is_float()) return 0;
  std::int64_t v = c.integer();
  if (v == 0) return std::numeric_limits<int>::max();
  int zeros = 0;
  while (v % 10 == 0) {
    v /= 10;
    ++zeros;
  }
  return zeros;
}

// Of two same-meaning integer bounds (x >= c vs x > c-1), prefer the rounder
// constant, then the smaller magnitude, then the non-strict form.
bool PreferStrict(const Atom& strict, const Atom& loose) {
  const Constant& s = strict.constants[0];
  const Constant& l = loose.constants[0];
  int rs = Roundness(s);
  int rl = Roundness(l);
  if (rs != rl) return rs > rl;
  long double as = std::fabs(s.value());
  long double al = std::fabs(l.value());
  if (as != al) return as < al;
  return false;
}

void ChooseBoundForms(std::vector<Atom>& atoms, const VariableKinds& kinds) {
  auto find = [&](const std::string& var, Shape shape) {
    return std::find_if(atoms.begin(), atoms.end(), [&](const Atom& a) {
      return a.shape == shape && a.lhs == var;
    });
  };
  for (const auto& [var, kind] : kinds) {
    if (kind == ValueKind::kFloat) continue;
    for (auto [strict, loose] : {std::pair{Shape::kGtConst, Shape::kGeConst},
                                 std::pair{Shape::kLtConst, Shape::kLeConst}}) {
      auto s = find(var, strict);
      auto l = find(var, loose);
      if (s == atoms.end() || l == atoms.end()) continue;
      atoms.erase(PreferStrict(*s, *l) ? l : s);
    }
  }
}

// Lower rank is tried for removal first.
int RemovalRank(const Atom& atom) {
  switch (atom.shape) {
    case Shape::kVarEq:
    case Shape::kVarLt:
    case Shape::kVarLe:
    case Shape::kVarGt:
    case Shape::kVarGe:
      return 0;
    case Shape::kNotEqConst:
      return 1;
    case Shape::kGeConst:
    case Shape::kGtConst:
    case Shape::kLeConst:
    case Shape::kLtConst:
      return 2;
    case Shape::kOneOf:
      return 3;
    case Shape::kEqConst:
      return 4;
    case Shape::kNotNull:
      return 5;
  }
  return 6;
}

std::vector<Atom> Minimize(std::vector<Atom> atoms,
                           const DecisionOptions& options) {
  std::vector<Atom> order = atoms;
  std::sort(order.begin(), order.end(), [](const Atom& a, const Atom& b) {
    int ra = RemovalRank(a);
    int rb = RemovalRank(b);
    if (ra != rb) return ra < rb;
    return AtomLess(b, a);
  });
  for (const Atom& candidate : order) {
    std::vector<Atom> others;
    for (const Atom& atom : atoms) {
      if (!(atom == candidate)) others.push_back(atom);
    }
    if (Entails(Condition(others), Condition({candidate}), options)) {
      atoms = std::move(others);
    }
  }
  return atoms;
}

}  // namespace

std::vector<Atom> InstantiateTemplates(const VariableKinds& variables) {
  std::vector<Atom> out;
  for (const auto& [name, kind] : variables) {
    switch (kind) {
      case ValueKind::kInt:
      case ValueKind::kUint:
        for (Shape shape : {Shape::kEqConst, Shape::kGeConst, Shape::kLeConst,
                            Shape::kGtConst, Shape::kLtConst,
                            Shape::kNotEqConst, Shape::kOneOf}) {
          out.push_back(Atom::Candidate(shape, name));
        }
        break;
      case ValueKind::kFloat:
        for (Shape shape : {Shape::kGeConst, Shape::kLeConst, Shape::kGtConst,
                            Shape::kLtConst}) {
          out.push_back(Atom::Candidate(shape, name));
        }
        break;
      case ValueKind::kBool:
        out.push_back(Atom::Candidate(Shape::kEqConst, name));
        break;
      case ValueKind::kPtr:
        out.push_back(Atom::Candidate(Shape::kEqConst, name));
        out.push_back(Atom::Candidate(Shape::kNotNull, name));
        break;
    }
  }
  for (auto a = variables.begin(); a != variables.end(); ++a) {
    for (auto b = std::next(a); b != variables.end(); ++b) {
      if (!Comparable(a->second, b->second)) continue;
      for (Shape shape : {Shape::kVarEq, Shape::kVarLt, Shape::kVarLe,
                          Shape::kVarGt, Shape::kVarGe}) {
        out.push_back(
            Atom::Candidate(shape, a->first, b->first).Canonical());
      }
    }
  }
  std::sort(out.begin(), out.end(), AtomLess);
  return out;
}

CheckResult CheckAtom(const Atom& candidate, const SampleSet& samples) {
  CheckResult result;
  if (samples.empty()) return result;

  std::vector<std::string> vars = candidate.Variables();
  std::vector<std::vector<long double>> columns(vars.size());
  ValueKind kind = ValueKind::kInt;
  for (const Sample& sample : samples) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      auto it = sample.bindings.find(vars[i]);
      if (it == sample.bindings.end()) {
        result.warning = "sample " + std::to_string(sample.invocation_id) +
                         " at " + sample.point.Name() + " does not bind " +
                         vars[i] + "; " + candidate.ToString() +
                         " discarded";
        return result;
      }
      if (i == 0) kind = it->second.kind();
      columns[i].push_back(it->second.AsNumber());
    }
  }
  const bool is_float = kind == ValueKind::kFloat;
  const std::vector<long double>& xs = columns[0];
  const auto [min_it, max_it] = std::minmax_element(xs.begin(), xs.end());
  const long double lo = *min_it;
  const long double hi = *max_it;

  std::optional<Constant> constant;
  switch (candidate.shape) {
    case Shape::kEqConst:
      if (lo != hi) return result;
      if (kind == ValueKind::kPtr && lo != 0) return result;
      constant = ToConstant(lo, is_float);
      break;
    case Shape::kGeConst:
      constant = ToConstant(lo, is_float);
      break;
    case Shape::kLeConst:
      constant = ToConstant(hi, is_float);
      break;
    case Shape::kGtConst:
      constant = ToConstant(is_float ? lo : lo - 1, is_float);
      break;
    case Shape::kLtConst:
      constant = ToConstant(is_float ? hi : hi + 1, is_float);
      break;
    case Shape::kNotEqConst:
      constant = is_float ? Constant::Real(0) : Constant::Integer(0);
      break;
    case Shape::kOneOf: {
      std::set<long double> distinct(xs.begin(), xs.end());
      if (distinct.size() < 2 || distinct.size() > kMaxOneOf) return result;
      std::vector<Constant> values;
      for (long double v : distinct) {
        auto c = ToConstant(v, is_float);
        if (!c) return result;
        values.push_back(*c);
      }
      result.bound = Atom::OneOf(candidate.lhs, std::move(values));
      result.survives = true;
      return result;
    }
    case Shape::kNotNull:
      result.bound = Atom::NotNull(candidate.lhs);
      result.survives = std::none_of(xs.begin(), xs.end(),
                                     [](long double v) { return v == 0; });
      return result;
    default: {
      Atom bound = Atom::Binary(candidate.shape, candidate.lhs, candidate.rhs);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        Assignment point{{vars[0], xs[i]}, {vars[1], columns[1][i]}};
        if (!Evaluate(bound, point)) return result;
      }
      result.bound = bound;
      result.survives = true;
      return result;
    }
  }
  if (!constant) return result;
  Atom bound = Atom::Unary(candidate.shape, candidate.lhs, *constant);
  for (long double x : xs) {
    if (!Evaluate(bound, {{candidate.lhs, x}})) return result;
  }
  result.bound = bound;
  result.survives = true;
  return result;
}

VariableKinds CollectVariables(const SampleSet& samples) {
  VariableKinds kinds;
  for (const Sample& sample : samples) {
    for (const auto& [name, value] : sample.bindings) {
      auto [it, inserted] = kinds.emplace(name, value.kind());
      if (!inserted && it->second != value.kind()) {
        throw Error(ErrorCode::kInput,
                    "variable " + name + " is bound as both " +
                        ValueKindName(it->second) + " and " +
                        ValueKindName(value.kind()));
      }
    }
  }
  return kinds;
}

PropertySet MineProperties(const ProgramPoint& point, const SampleSet& samples,
                           const MinerOptions& options) {
  PropertySet set;
  set.point = point;
  set.sample_count = samples.size();
  for (const Sample& sample : samples) {
    if (sample.point != point) {
      throw Error(ErrorCode::kInput, "sample for " + sample.point.Name() +
                                         " passed while mining " +
                                         point.Name());
    }
  }
  if (samples.size() < options.min_samples) {
    set.uncomparable = true;
    return set;
  }
  VariableKinds kinds = CollectVariables(samples);
  std::vector<Atom> survivors;
  for (const Atom& candidate : InstantiateTemplates(kinds)) {
    CheckResult checked = CheckAtom(candidate, samples);
    if (!checked.warning.empty()) set.warnings.push_back(checked.warning);
    if (checked.survives) survivors.push_back(checked.bound.Canonical());
  }
  ChooseBoundForms(survivors, kinds);

  DecisionOptions decision = options.decision;
  for (const auto& [name, kind] : kinds) decision.kinds.emplace(name, kind);
  set.condition = Condition(Minimize(std::move(survivors), decision));
  return set;
}

std::vector<PropertySet> MineTrace(const TraceLog& trace,
                                   const std::vector<ProgramPoint>& points,
                                   const MinerOptions& options) {
  std::vector<ProgramPoint> wanted = points;
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
  std::vector<PropertySet> out;
  for (const ProgramPoint& point : wanted) {
    out.push_back(MineProperties(point, SamplesAt(trace, point), options));
  }
  return out;
}

std::string SerializeProperties(const std::vector<PropertySet>& sets) {
  std::string out;
  for (const PropertySet& set : sets) {
    out += set.point.Name() + " := ";
    out += set.uncomparable ? "?uncomparable" : Serialize(set.condition);
    out += "\n";
  }
  return out;
}

std::vector<PropertySet> ParseProperties(std::string_view text) {
  std::vector<PropertySet> out;
  std::vector<std::string> lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = Trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    std::size_t sep = line.find(" := ");
    if (sep == std::string_view::npos) {
      throw ParseError("expected '<point> := <condition>'", i + 1);
    }
    auto point = ProgramPoint::FromName(Trim(line.substr(0, sep)));
    if (!point) throw ParseError("malformed program point", i + 1);
    PropertySet set;
    set.point = *point;
    std::string_view body = Trim(line.substr(sep + 4));
    if (body == "?uncomparable") {
      set.uncomparable = true;
    } else {
      try {
        set.condition = ParseCondition(body);
      } catch (const ParseError& e) {
        throw ParseError(e.detail(), i + 1, sep + 4 + e.column());
      }
    }
    out.push_back(std::move(set));
  }
  return out;
}

PropertyMap ToPropertyMap(const std::vector<PropertySet>& sets) {
  PropertyMap map;
  for (const PropertySet& set : sets) map[set.point] = set;
  return map;
}

}  // namespace bdci
