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

#include "bdci/trace.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "bdci/error.h"
#include "bdci/text.h"

namespace bdci {

namespace {

constexpr std::string_view kEnterSuffix = "_ENTER";
constexpr std::string_view kExitSuffix = "_EXIT";

const char* PointKindName(PointKind kind) {
  return kind == PointKind::kEnter ? "ENTER" : "EXIT";
}

std::optional<PointKind> PointKindFromName(std::string_view name) {
  if (name == "ENTER") return PointKind::kEnter;
  if (name == "EXIT") return PointKind::kExit;
  return std::nullopt;
}

template <typename T>
std::optional<T> ParseInteger(std::string_view text) {
  if (text.empty()) return std::nullopt;
  // from_chars rejects a leading '+', which is what we want.
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  if (ec == std::errc::result_out_of_range) {
    throw Error(ErrorCode::kValue,
                "integer out of range: " + std::string(text));
  }
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

std::string ProgramPoint::Name() const {
  return function +
         std::string(kind == PointKind::kEnter ? kEnterSuffix : kExitSuffix);
}

std::optional<ProgramPoint> ProgramPoint::FromName(std::string_view name) {
  for (auto [suffix, kind] : {std::pair{kEnterSuffix, PointKind::kEnter},
                              std::pair{kExitSuffix, PointKind::kExit}}) {
    if (name.size() > suffix.size() && name.ends_with(suffix)) {
      std::string function(name.substr(0, name.size() - suffix.size()));
      if (function.find_first_of(" \t\r\n") != std::string::npos) {
        return std::nullopt;
      }
      return ProgramPoint{std::move(function), kind};
    }
  }
  return std::nullopt;
}

const char* ValueKindName(ValueKind kind) {
  switch (kind) {
    case ValueKind::kInt:
      return "int";
    case ValueKind::kUint:
      return "uint";
    case ValueKind::kBool:
      return "bool";
    case ValueKind::kFloat:
      return "float";
    case ValueKind::kPtr:
      return "ptr";
  }
  return "?";
}

std::optional<ValueKind> ValueKindFromName(std::string_view name) {
  if (name == "int") return ValueKind::kInt;
  if (name == "uint") return ValueKind::kUint;
  if (name == "bool") return ValueKind::kBool;
  if (name == "float") return ValueKind::kFloat;
  if (name == "ptr") return ValueKind::kPtr;
  return std::nullopt;
}

bool IsIntegerKind(ValueKind kind) { return kind != ValueKind::kFloat; }

TypedValue TypedValue::Int(std::int64_t value) {
  return TypedValue(ValueKind::kInt, value);
}

TypedValue TypedValue::Uint(std::uint64_t value) {
  return TypedValue(ValueKind::kUint, value);
}

TypedValue TypedValue::Bool(bool value) {
  return TypedValue(ValueKind::kBool, std::int64_t{value ? 1 : 0});
}

TypedValue TypedValue::Float(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kValue, "non-finite float value");
  }
  return TypedValue(ValueKind::kFloat, value);
}

TypedValue TypedValue::Ptr(std::uint64_t address) {
  return TypedValue(ValueKind::kPtr, address);
}

std::optional<TypedValue> TypedValue::Parse(ValueKind kind,
                                           std::string_view text) {
  switch (kind) {
    case ValueKind::kInt: {
      auto v = ParseInteger<std::int64_t>(text);
      if (!v) return std::nullopt;
      return Int(*v);
    }
    case ValueKind::kUint:
    case ValueKind::kPtr: {
      if (text.starts_with('-')) return std::nullopt;
      auto v = ParseInteger<std::uint64_t>(text);
      if (!v) return std::nullopt;
      return kind == ValueKind::kUint ? Uint(*v) : Ptr(*v);
    }
    case ValueKind::kBool:
      if (text == "0") return Bool(false);
      if (text == "1") return Bool(true);
      return std::nullopt;
    case ValueKind::kFloat: {
      if (text.empty() || text.starts_with('+')) return std::nullopt;
      double v = 0;
      auto [ptr, ec] =
          std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec == std::errc::result_out_of_range) {
        throw Error(ErrorCode::kValue,
                    "float out of range: " + std::string(text));
      }
      if (ec != std::errc() || ptr != text.data() + text.size()) {
        return std::nullopt;
      }
      return Float(v);
    }
  }
  return std::nullopt;
}

long double TypedValue::AsNumber() const {
  return std::visit([](auto v) { return static_cast<long double>(v); },
                    payload_);
}

std::string TypedValue::ToString() const {
  return std::visit(
      [](auto v) -> std::string {
        if constexpr (std::is_same_v<decltype(v), double>) {
          return FormatShortest(v);
        } else {
          return std::to_string(v);
        }
      },
      payload_);
}

namespace {

class TraceParser {
 public:
  TraceLog Parse(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
      throw ParseError("missing trace header", 1);
    }
    line_no_ = 1;
    if (line != kTraceHeader) {
      throw ParseError("expected '" + std::string(kTraceHeader) + "'", 1);
    }
    while (std::getline(in, line)) {
      ++line_no_;
      if (line.empty()) continue;
      HandleLine(line);
    }
    if (open_) {
      throw ParseError("unterminated block for " + current_.point.Name(),
                       line_no_);
    }
    return std::move(trace_);
  }

 private:
  void HandleLine(std::string_view line) {
    std::vector<std::string_view> tokens = SplitSpaces(line);
    if (std::find(tokens.begin(), tokens.end(), std::string_view()) !=
        tokens.end()) {
      throw Malformed("tokens must be separated by single spaces");
    }
    std::string_view tag = tokens[0];
    if (!open_) {
      if (tag == "L") {
        if (tokens.size() != 2) throw Malformed("expected 'L <label>'");
        if (seen_label_) throw Malformed("duplicate label line");
        if (!trace_.samples.empty()) {
          throw Malformed("label must precede all blocks");
        }
        seen_label_ = true;
        trace_.source_label = std::string(tokens[1]);
        return;
      }
      if (tag == "PP") {
        OpenBlock(tokens);
        return;
      }
      throw Malformed("expected 'PP' or 'L'");
    }
    if (tag == "V") {
      AddBinding(tokens);
      return;
    }
    if (tag == "EE") {
      if (tokens.size() != 1) throw Malformed("trailing tokens after 'EE'");
      CloseBlock();
      return;
    }
    throw Malformed("expected 'V' or 'EE'");
  }

  void OpenBlock(const std::vector<std::string_view>& tokens) {
    if (tokens.size() != 4) {
      throw Malformed("expected 'PP <function> <ENTER|EXIT> <id>'");
    }
    auto kind = PointKindFromName(tokens[2]);
    if (!kind) throw Malformed("bad point kind '" + std::string(tokens[2]) + "'");
    std::optional<std::uint64_t> id;
    if (!tokens[3].starts_with('-')) {
      id = ParseInteger<std::uint64_t>(tokens[3]);
    }
    if (!id) throw Malformed("bad invocation id '" + std::string(tokens[3]) + "'");
    current_ = Sample{ProgramPoint{std::string(tokens[1]), *kind}, *id, {}};
    open_ = true;
  }

  void AddBinding(const std::vector<std::string_view>& tokens) {
    if (tokens.size() != 4) throw Malformed("expected 'V <name> <kind> <value>'");
    std::string name(tokens[1]);
    auto kind = ValueKindFromName(tokens[2]);
    if (!kind) throw Malformed("unknown kind '" + std::string(tokens[2]) + "'");
    if (name == kReturnVariable && current_.point.kind == PointKind::kEnter) {
      throw Malformed("'return' bound at an ENTER point");
    }
    TypedValue value = ParseValue(*kind, tokens[3]);
    auto key = std::pair{current_.point, name};
    auto [it, inserted] = kinds_.emplace(key, *kind);
    if (!inserted && it->second != *kind) {
      throw Malformed("variable '" + name + "' at " + current_.point.Name() +
                      " was " + ValueKindName(it->second) + ", now " +
                      ValueKindName(*kind));
    }
    if (!current_.bindings.emplace(name, value).second) {
      throw Malformed("duplicate variable '" + name + "'");
    }
  }

  TypedValue ParseValue(ValueKind kind, std::string_view text) {
    std::optional<TypedValue> value;
    try {
      value = TypedValue::Parse(kind, text);
    } catch (const Error& e) {
      throw Error(e.code(),
                  "line " + std::to_string(line_no_) + ": " + e.what());
    }
    if (!value) {
      throw Malformed(std::string("bad ") + ValueKindName(kind) + " value '" +
                      std::string(text) + "'");
    }
    return *value;
  }

  void CloseBlock() {
    auto key = std::pair{current_.point.function, current_.invocation_id};
    if (current_.point.kind == PointKind::kEnter) {
      if (!entered_.insert(key).second) {
        throw Error(ErrorCode::kPairing,
                    "line " + std::to_string(line_no_) + ": duplicate ENTER " +
                        current_.point.function + " #" +
                        std::to_string(current_.invocation_id));
      }
    } else {
      if (!entered_.contains(key) || !exited_.insert(key).second) {
        throw Error(ErrorCode::kPairing,
                    "line " + std::to_string(line_no_) + ": EXIT " +
                        current_.point.function + " #" +
                        std::to_string(current_.invocation_id) +
                        " has no matching ENTER");
      }
    }
    trace_.samples.push_back(std::move(current_));
    current_ = Sample{};
    open_ = false;
  }

  ParseError Malformed(const std::string& what) const {
    return ParseError(what, line_no_);
  }

  TraceLog trace_;
  Sample current_;
  bool open_ = false;
  bool seen_label_ = false;
  std::size_t line_no_ = 0;
  std::map<std::pair<ProgramPoint, std::string>, ValueKind> kinds_;
  std::set<std::pair<std::string, std::uint64_t>> entered_;
  std::set<std::pair<std::string, std::uint64_t>> exited_;
};

}  // namespace

TraceLog ParseTrace(std::istream& in) { return TraceParser().Parse(in); }

TraceLog ParseTrace(std::string_view text) {
  std::istringstream in{std::string(text)};
  return ParseTrace(in);
}

TraceLog ReadTraceFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  try {
    return ParseTrace(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string SerializeTrace(const TraceLog& trace) {
  std::string out(kTraceHeader);
  out += '\n';
  if (!trace.source_label.empty()) {
    out += "L " + trace.source_label + '\n';
  }
  for (const Sample& s : trace.samples) {
    out += "PP " + s.point.function + ' ' + PointKindName(s.point.kind) + ' ' +
           std::to_string(s.invocation_id) + '\n';
    for (const auto& [name, value] : s.bindings) {
      out += "V " + name + ' ' + ValueKindName(value.kind()) + ' ' +
             value.ToString() + '\n';
    }
    out += "EE\n";
  }
  return out;
}

SampleSet SamplesAt(const TraceLog& trace, const ProgramPoint& point) {
  SampleSet out;
  std::copy_if(trace.samples.begin(), trace.samples.end(),
               std::back_inserter(out),
               [&](const Sample& s) { return s.point == point; });
  return out;
}

std::vector<ProgramPoint> PointsOf(const TraceLog& trace) {
  std::vector<ProgramPoint> out;
  std::set<ProgramPoint> seen;
  for (const Sample& s : trace.samples) {
    if (seen.insert(s.point).second) out.push_back(s.point);
  }
  return out;
}

TraceLog MergeTraces(const std::vector<TraceLog>& traces) {
  TraceLog merged;
  if (traces.empty()) return merged;
  merged.source_label = traces.front().source_label;
  std::map<std::string, std::uint64_t> next_id;
  for (const TraceLog& trace : traces) {
    if (trace.source_label != merged.source_label) {
      throw Error(ErrorCode::kLabelMismatch,
                  "cannot merge trace labelled '" + trace.source_label +
                      "' into '" + merged.source_label + "'");
    }
    std::map<std::pair<std::string, std::uint64_t>, std::uint64_t> renumbered;
    for (const Sample& s : trace.samples) {
      Sample copy = s;
      auto key = std::pair{s.point.function, s.invocation_id};
      auto it = renumbered.find(key);
      if (it == renumbered.end()) {
        it = renumbered.emplace(key, ++next_id[s.point.function]).first;
      }
      copy.invocation_id = it->second;
      merged.samples.push_back(std::move(copy));
    }
  }
  return merged;
}

TraceLog LoadTraceDirectory(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kIo, "not a trace directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".trace") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<TraceLog> traces;
  traces.reserve(files.size());
  for (const fs::path& file : files) traces.push_back(ReadTraceFile(file));
  return MergeTraces(traces);
}

}  // namespace bdci
