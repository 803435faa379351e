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

// End-to-end analysis of version triples: scope the changes, run the tests
// of every version with tracing on, mine the traces and compare.

#ifndef BDCI_PIPELINE_H_
#define BDCI_PIPELINE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bdci/analyzer.h"
#include "bdci/miner.h"
#include "bdci/scm.h"
#include "bdci/scoper.h"
#include "bdci/trace.h"

namespace bdci {

// Settings shared by the CLI, the config file and the campaign runner.
struct Config {
  std::filesystem::path repo = ".";
  Policy policy = Policy::kMergeRequest;
  std::string base;  // optional override of the common ancestor
  std::string a, b;
  std::vector<std::string> branches;
  // Shell command run inside each version's tree. {workdir}, {trace_dir},
  // {points} and {label} are replaced by shell-quoted values.
  std::string test_command;
  std::filesystem::path report;     // empty: standard output
  std::filesystem::path work_dir = ".bdci";
  std::filesystem::path trace_dir;  // empty: <work_dir>/traces
  std::size_t min_samples = 5;
  std::vector<std::string> suppress;
  std::uint64_t grid_budget = 1'000'000;
  std::vector<std::string> sources;  // subdirectories to scope; empty: all

  std::filesystem::path TraceRoot() const {
    return trace_dir.empty() ? work_dir / "traces" : trace_dir;
  }
  MinerOptions MinerSettings() const;
  AnalyzerOptions AnalyzerSettings() const;
};

// Applies `key = value` lines ('#' comments, blank lines allowed). Keys:
// repo, policy, base, a, b, branches, tests, report, work_dir, trace_dir,
// min_samples, suppress, grid_budget, sources. List values are
// comma-separated. Throws Error{kConfig} naming the line.
void ApplyConfigText(Config& config, std::string_view text);

// Throws Error{kConfig} when a setting is out of range.
void ValidateConfig(const Config& config, bool need_tests = true);

// Stable digest of every regular file below `root` (paths and contents).
std::string TreeHash(const std::filesystem::path& root);

// Recursively copies `from` over `to`, replacing existing files.
void OverlayTree(const std::filesystem::path& from,
                 const std::filesystem::path& to);

struct VersionInput {
  std::string label;
  std::filesystem::path tree;
  // Identifies the tree content for the trace cache: a commit id, or a
  // TreeHash when the tree does not come from a repository.
  std::string cache_key;
};

struct TraceRun {
  std::filesystem::path dir;
  bool cached = false;
};

// Runs the test command for one version unless a complete trace directory
// for (cache_key, points) already exists.
TraceRun CollectTraces(const VersionInput& version,
                       const std::vector<ProgramPoint>& points,
                       const Config& config);

struct TripleResult {
  std::array<std::string, 3> labels;
  FunctionChanges changes1, changes2;
  std::vector<ProgramPoint> monitored;
  std::array<TraceRun, 3> traces;
  std::array<PropertyMap, 3> properties;
  ConflictAnalysis analysis;
  std::string report;
};

// Errors from any stage are rethrown as Error{kStage} naming the stage and
// the version.
TripleResult AnalyzeTriple(const std::array<VersionInput, 3>& versions,
                           const Config& config);

struct AnalyzeOutcome {
  std::string report;
  std::size_t live_conflicts = 0;
  std::vector<std::string> warnings;
};

// The policy-driven run over a repository: plan, materialize each distinct
// commit once under <work_dir>/trees, analyze every triple. Each triple's
// report is preceded by a `COMPARISON` line.
AnalyzeOutcome AnalyzeRepository(VersionControl& vcs, const Config& config);

}  // namespace bdci

#endif  // BDCI_PIPELINE_H_
