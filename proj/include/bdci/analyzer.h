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

// Behavioural deltas between mined property maps, the interfering region of
// two branches, conflict classification and the plain-text report.

#ifndef BDCI_ANALYZER_H_
#define BDCI_ANALYZER_H_

#include <array>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bdci/condition.h"
#include "bdci/miner.h"
#include "bdci/trace.h"

namespace bdci {

enum class ChangeStatus { kUnchanged, kChanged, kUncomparable };

const char* ChangeStatusName(ChangeStatus status);

struct PointChange {
  ProgramPoint point;
  ChangeStatus status = ChangeStatus::kUnchanged;
  Condition base;
  Condition version;
  // Canonical atoms present on both sides, only in the base, only in the
  // version.
  std::vector<Atom> same, dropped, added;
  EquivVerdict verdict;  // meaningless when kUncomparable
  bool base_uncomparable = false;
  bool version_uncomparable = false;
};

using ChangeSet = std::map<ProgramPoint, PointChange>;

struct AnalyzerOptions {
  DecisionOptions decision;
  // Variables whose differences never make a conflict on their own, such
  // as file descriptors or addresses that vary run to run.
  std::set<std::string, std::less<>> noise;
};

// Throws Error{kInput} when the two maps do not cover the same points.
ChangeSet BehavioralChanges(const PropertyMap& base, const PropertyMap& version,
                            const AnalyzerOptions& options = {});

struct CoverageGap {
  ProgramPoint point;
  // Which inputs (0 = base, 1, 2) had too few samples there.
  std::vector<int> versions;
};

struct InterferingRegion {
  std::vector<ProgramPoint> points;
  std::vector<CoverageGap> gaps;
};

InterferingRegion ComputeInterferingRegion(const ChangeSet& changes1,
                                           const ChangeSet& changes2);

enum class Suppression { kNone, kEquivalent, kNoise };

struct ConflictReport {
  ProgramPoint point;
  std::array<Condition, 3> conditions;  // base, branch 1, branch 2
  EquivVerdict v01, v02, v12;
  Suppression suppression = Suppression::kNone;
  std::vector<std::string> noise_variables;  // kNoise only

  bool live() const { return suppression == Suppression::kNone; }
};

struct ConflictAnalysis {
  ChangeSet changes1;
  ChangeSet changes2;
  InterferingRegion region;
  std::vector<ConflictReport> reports;  // one per interfering point

  std::size_t LiveCount() const;
};

ConflictAnalysis DetectConflicts(const PropertyMap& base,
                                 const PropertyMap& branch1,
                                 const PropertyMap& branch2,
                                 const AnalyzerOptions& options = {});

// Live conflicts as `HIGHER-ORDER CONFLICT` blocks separated by blank lines
// (or `NO HIGHER-ORDER CONFLICTS`), followed by a summary of suppressed
// reports and coverage gaps. `labels` name the base and the two branches in
// the summary lines.
std::string RenderReport(const ConflictAnalysis& analysis,
                         const std::array<std::string, 3>& labels = {
                             "base", "branch 1", "branch 2"});

// The conflict blocks of a rendered report, conditions re-parsed. Throws
// ParseError for a malformed block.
struct ParsedConflict {
  std::string point;
  std::array<Condition, 3> conditions;
};
std::vector<ParsedConflict> ParseReport(std::string_view text);

}  // namespace bdci

#endif  // BDCI_ANALYZER_H_
