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

// Execution traces recorded at function entry and exit.
//
// A trace file is line oriented:
//
//   # bdci trace v1
//   L <source_label>                       (optional, at most once)
//   PP <function> <ENTER|EXIT> <invocation_id>
//   V <name> <int|uint|bool|float|ptr> <value>
//   ...
//   EE
//
// EXIT blocks carry the entry-time parameter values (the tracer snapshots
// them) and may bind the reserved name `return`.

#ifndef BDCI_TRACE_H_
#define BDCI_TRACE_H_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bdci {

inline constexpr std::string_view kTraceHeader = "# bdci trace v1";
inline constexpr std::string_view kReturnVariable = "return";

enum class PointKind { kEnter, kExit };

struct ProgramPoint {
  std::string function;
  PointKind kind = PointKind::kEnter;

  // `<function>_ENTER` or `<function>_EXIT`.
  std::string Name() const;

  // Inverse of Name(). Returns nullopt for anything that is not a rendered
  // program point.
  static std::optional<ProgramPoint> FromName(std::string_view name);

  auto operator<=>(const ProgramPoint&) const = default;
};

enum class ValueKind { kInt, kUint, kBool, kFloat, kPtr };

const char* ValueKindName(ValueKind kind);
std::optional<ValueKind> ValueKindFromName(std::string_view name);

// True for every kind that lives in the integer domain (everything except
// float).
bool IsIntegerKind(ValueKind kind);

class TypedValue {
 public:
  static TypedValue Int(std::int64_t value);
  static TypedValue Uint(std::uint64_t value);
  static TypedValue Bool(bool value);
  static TypedValue Float(double value);  // throws kValue on NaN/Inf
  static TypedValue Ptr(std::uint64_t address);

  // Parses a payload written in trace syntax for the given kind. Returns
  // nullopt on bad syntax; throws Error{kValue} for NaN/Inf or values that
  // do not fit the kind.
  static std::optional<TypedValue> Parse(ValueKind kind,
                                         std::string_view text);

  ValueKind kind() const { return kind_; }

  // Numeric view used by the miner and the evaluator. Exact for every
  // int64/uint64 payload on platforms with an 80-bit long double.
  long double AsNumber() const;

  // Trace syntax for the payload (no kind prefix).
  std::string ToString() const;

  bool operator==(const TypedValue&) const = default;

 private:
  TypedValue(ValueKind kind, std::variant<std::int64_t, std::uint64_t, double>
                                 payload)
      : kind_(kind), payload_(payload) {}

  ValueKind kind_;
  std::variant<std::int64_t, std::uint64_t, double> payload_;
};

using Bindings = std::map<std::string, TypedValue, std::less<>>;

struct Sample {
  ProgramPoint point;
  std::uint64_t invocation_id = 0;
  Bindings bindings;

  bool operator==(const Sample&) const = default;
};

using SampleSet = std::vector<Sample>;

struct TraceLog {
  std::vector<Sample> samples;
  std::string source_label;

  bool operator==(const TraceLog&) const = default;
};

// Throws ParseError (malformed line, inconsistent kinds, `return` at ENTER),
// Error{kPairing} for an EXIT without a prior ENTER, Error{kValue} for
// non-finite floats or out-of-range integers.
TraceLog ParseTrace(std::istream& in);
TraceLog ParseTrace(std::string_view text);
TraceLog ReadTraceFile(const std::filesystem::path& path);

std::string SerializeTrace(const TraceLog& trace);

// All samples at `point`, in trace order.
SampleSet SamplesAt(const TraceLog& trace, const ProgramPoint& point);

// Distinct program points in order of first appearance.
std::vector<ProgramPoint> PointsOf(const TraceLog& trace);

// Concatenates traces and renumbers invocation ids so they stay unique per
// function. Throws Error{kLabelMismatch} when labels differ.
TraceLog MergeTraces(const std::vector<TraceLog>& traces);

// Reads every `*.trace` file under `dir` (sorted by file name) and merges
// them.
TraceLog LoadTraceDirectory(const std::filesystem::path& dir);

}  // namespace bdci

#endif  // BDCI_TRACE_H_
