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

// Daikon-style likely-invariant inference: instantiate a fixed template
// vocabulary over the variables seen at a program point, bind each template
// to the tightest constant the samples allow, discard falsified ones, then
// greedily drop atoms the rest already imply.

#ifndef BDCI_MINER_H_
#define BDCI_MINER_H_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bdci/condition.h"
#include "bdci/trace.h"

namespace bdci {

using VariableKinds = std::map<std::string, ValueKind, std::less<>>;

struct MinerOptions {
  std::size_t min_samples = 5;
  std::size_t max_one_of = 3;
  DecisionOptions decision;
};

struct PropertySet {
  ProgramPoint point;
  Condition condition;
  std::size_t sample_count = 0;
  bool uncomparable = false;
  std::vector<std::string> warnings;
};

// Unbound candidates over `variables`, in canonical order.
std::vector<Atom> InstantiateTemplates(const VariableKinds& variables);

struct CheckResult {
  bool survives = false;
  Atom bound;           // meaningful only when survives
  std::string warning;  // set when a sample lacked a mentioned variable
};

CheckResult CheckAtom(const Atom& candidate, const SampleSet& samples);

// Union of the variables bound in `samples`. Throws Error{kInput} when a
// name is bound with different kinds.
VariableKinds CollectVariables(const SampleSet& samples);

// Throws Error{kInput} when the samples belong to different program points.
PropertySet MineProperties(const ProgramPoint& point, const SampleSet& samples,
                           const MinerOptions& options = {});

// Mines every requested point (every point in the trace when `points` is
// empty). Requested points without samples come back uncomparable.
// One set per requested point, sorted; points without samples come back
// uncomparable. Pass PointsOf(trace) to mine everything observed.
std::vector<PropertySet> MineTrace(const TraceLog& trace,
                                   const std::vector<ProgramPoint>& points,
                                   const MinerOptions& options = {});

// Property files hold one `<point> := <condition>` line per program point,
// or `<point> := ?uncomparable`. Blank lines and `#` comments are ignored.
std::string SerializeProperties(const std::vector<PropertySet>& sets);
std::vector<PropertySet> ParseProperties(std::string_view text);

using PropertyMap = std::map<ProgramPoint, PropertySet>;
PropertyMap ToPropertyMap(const std::vector<PropertySet>& sets);

}  // namespace bdci

#endif  // BDCI_MINER_H_
