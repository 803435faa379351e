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

#include "bdci/pipeline.h"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>
#include <system_error>

#include "bdci/error.h"
#include "bdci/process.h"
#include "bdci/text.h"

namespace fs = std::filesystem;

namespace bdci {
namespace {

constexpr const char* kCompleteMarker = ".complete";
constexpr const char* kPointsFile = "monitored.points";

std::uint64_t ParseUnsigned(std::string_view text, const std::string& key) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kConfig,
                key + ": expected a non-negative integer, got '" +
                    std::string(text) + "'");
  }
  return value;
}

std::string Replace(std::string text, std::string_view from,
                    const std::string& to) {
  for (std::size_t pos = text.find(from); pos != std::string::npos;
       pos = text.find(from, pos + to.size())) {
    text.replace(pos, from.size(), to);
  }
  return text;
}

std::string ShortId(const std::string& commit) { return commit.substr(0, 12); }

[[noreturn]] void StageFailure(const std::string& stage,
                               const std::string& label, const Error& e) {
  std::string where = label.empty() ? stage : stage + " [" + label + "]";
  throw Error(ErrorCode::kStage, where + ": " + e.what());
}

}  // namespace

MinerOptions Config::MinerSettings() const {
  MinerOptions options;
  options.min_samples = min_samples;
  options.decision.grid_budget = grid_budget;
  return options;
}

AnalyzerOptions Config::AnalyzerSettings() const {
  AnalyzerOptions options;
  options.decision.grid_budget = grid_budget;
  options.noise.insert(suppress.begin(), suppress.end());
  return options;
}

void ApplyConfigText(Config& config, std::string_view text) {
  std::vector<std::string> lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = Trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    std::size_t eq = line.find('=');
    std::string where = "config line " + std::to_string(i + 1);
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfig, where + ": expected 'key = value'");
    }
    std::string key(Trim(line.substr(0, eq)));
    std::string value(Trim(line.substr(eq + 1)));
    try {
      if (key == "repo") {
        config.repo = value;
      } else if (key == "policy") {
        config.policy = ParsePolicy(value);
      } else if (key == "base") {
        config.base = value;
      } else if (key == "a") {
        config.a = value;
      } else if (key == "b") {
        config.b = value;
      } else if (key == "branches") {
        config.branches = SplitList(value, ',');
      } else if (key == "tests") {
        config.test_command = value;
      } else if (key == "report") {
        config.report = value;
      } else if (key == "work_dir") {
        config.work_dir = value;
      } else if (key == "trace_dir") {
        config.trace_dir = value;
      } else if (key == "min_samples") {
        config.min_samples = ParseUnsigned(value, key);
      } else if (key == "suppress") {
        config.suppress = SplitList(value, ',');
      } else if (key == "grid_budget") {
        config.grid_budget = ParseUnsigned(value, key);
      } else if (key == "sources") {
        config.sources = SplitList(value, ',');
      } else {
        throw Error(ErrorCode::kConfig, "unknown key '" + key + "'");
      }
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfig, where + ": " + e.what());
    }
  }
}

void ValidateConfig(const Config& config, bool need_tests) {
  if (config.min_samples < 2) {
    throw Error(ErrorCode::kConfig, "min_samples must be at least 2");
  }
  if (config.grid_budget < 1000) {
    throw Error(ErrorCode::kConfig, "grid_budget must be at least 1000");
  }
  if (need_tests && Trim(config.test_command).empty()) {
    throw Error(ErrorCode::kConfig, "no test command configured (tests)");
  }
}

std::string TreeHash(const fs::path& root) {
  std::vector<std::pair<std::string, fs::path>> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) {
      files.emplace_back(fs::relative(entry.path(), root).generic_string(),
                         entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::string digest;
  for (const auto& [rel, path] : files) {
    std::string content = ReadFile(path);
    digest += rel + '\0' + std::to_string(content.size()) + '\0' +
              HashHex(content) + '\n';
  }
  return HashHex(digest);
}

void OverlayTree(const fs::path& from, const fs::path& to) {
  fs::create_directories(to);
  fs::copy(from, to,
           fs::copy_options::recursive | fs::copy_options::overwrite_existing);
}

TraceRun CollectTraces(const VersionInput& version,
                       const std::vector<ProgramPoint>& points,
                       const Config& config) {
  std::string points_text = FormatPointList(points);
  std::string key = HashHex(version.cache_key + '\n' + points_text);
  TraceRun run;
  run.dir = fs::absolute(config.TraceRoot() / key);
  if (fs::exists(run.dir / kCompleteMarker)) {
    run.cached = true;
    return run;
  }
  fs::remove_all(run.dir);
  fs::create_directories(run.dir);
  fs::path points_file = run.dir / kPointsFile;
  WriteFile(points_file, points_text);
  fs::path build_dir = fs::absolute(config.work_dir / "build" / key);
  fs::create_directories(build_dir);

  std::string command = config.test_command;
  command = Replace(command, "{workdir}",
                    ShellQuote(fs::absolute(version.tree).string()));
  command = Replace(command, "{trace_dir}", ShellQuote(run.dir.string()));
  command = Replace(command, "{points}", ShellQuote(points_file.string()));
  command = Replace(command, "{label}", ShellQuote(version.label));

  ProcessOptions options;
  options.cwd = version.tree;
  options.env = {{"BDCI_TRACE_DIR", run.dir.string()},
                 {"BDCI_POINTS", points_file.string()},
                 {"BDCI_LABEL", version.label},
                 {"BDCI_BUILD_DIR", build_dir.string()}};
  ProcessResult result = RunShell(command, options);
  fs::remove_all(build_dir);
  if (!result.ok()) {
    std::string err(Trim(result.err));
    if (err.size() > 2000) err = "..." + err.substr(err.size() - 2000);
    throw Error(ErrorCode::kTool, "test command exited with status " +
                                      std::to_string(result.exit_code) +
                                      (err.empty() ? "" : ": " + err));
  }
  WriteFile(run.dir / kCompleteMarker, "");
  return run;
}

TripleResult AnalyzeTriple(const std::array<VersionInput, 3>& versions,
                           const Config& config) {
  TripleResult result;
  for (int i = 0; i < 3; ++i) result.labels[i] = versions[i].label;

  std::array<SourceTree, 3> trees;
  for (int i = 0; i < 3; ++i) {
    try {
      trees[i] = SourceTree::Load(versions[i].tree, config.sources);
    } catch (const Error& e) {
      StageFailure("scope", versions[i].label, e);
    }
  }
  result.changes1 = ChangedFunctions(trees[0], trees[1]);
  result.changes2 = ChangedFunctions(trees[0], trees[2]);
  std::set<std::string> changed = result.changes1.changed;
  changed.insert(result.changes2.changed.begin(), result.changes2.changed.end());
  std::set<std::string> signature = result.changes1.signature_changed;
  signature.insert(result.changes2.signature_changed.begin(),
                   result.changes2.signature_changed.end());
  CallGraph graph;
  for (const auto& tree : trees) graph.Merge(BuildCallGraph(tree));
  result.monitored = MonitoredSet(changed, graph, signature);

  MinerOptions miner = config.MinerSettings();
  for (int i = 0; i < 3; ++i) {
    if (result.monitored.empty()) break;
    try {
      result.traces[i] = CollectTraces(versions[i], result.monitored, config);
    } catch (const Error& e) {
      StageFailure("tests", versions[i].label, e);
    }
    try {
      TraceLog trace = LoadTraceDirectory(result.traces[i].dir);
      result.properties[i] =
          ToPropertyMap(MineTrace(trace, result.monitored, miner));
    } catch (const Error& e) {
      StageFailure("mine", versions[i].label, e);
    }
  }

  try {
    result.analysis =
        DetectConflicts(result.properties[0], result.properties[1],
                        result.properties[2], config.AnalyzerSettings());
  } catch (const Error& e) {
    StageFailure("compare", "", e);
  }
  result.report = RenderReport(result.analysis, result.labels);
  return result;
}

AnalyzeOutcome AnalyzeRepository(VersionControl& vcs, const Config& config) {
  ValidateConfig(config);
  PolicyRequest request;
  request.policy = config.policy;
  request.committed = config.a;
  request.a = config.a;
  request.b = config.b;
  if (!config.base.empty()) request.base = config.base;
  std::vector<std::string> branches = config.branches;
  if (branches.empty() && config.policy == Policy::kMergeRequest) {
    branches = {config.a, config.b};
  }

  AnalyzeOutcome outcome;
  ComparisonPlan plan;
  try {
    plan = PlanComparisons(vcs, request, branches);
  } catch (const Error& e) {
    StageFailure("plan", "", e);
  }
  outcome.warnings = plan.warnings;

  const fs::path trees = config.work_dir / "trees";
  auto materialized = [&](const VersionRef& ref) {
    fs::path dir = trees / ref.commit;
    fs::path marker = trees / (ref.commit + ".ok");
    if (!fs::exists(marker)) {
      fs::remove_all(dir);
      try {
        Materialize(vcs, ref.commit, dir);
      } catch (const Error& e) {
        StageFailure("materialize", ref.rev, e);
      }
      WriteFile(marker, ref.rev + "\n");
    }
    return dir;
  };

  std::ostringstream report;
  for (std::size_t t = 0; t < plan.triples.size(); ++t) {
    const ComparisonTriple& triple = plan.triples[t];
    std::string base_label =
        request.base ? triple.base.rev : "base@" + ShortId(triple.base.commit);
    std::array<VersionInput, 3> versions{
        VersionInput{base_label, materialized(triple.base), triple.base.commit},
        VersionInput{triple.a.rev, materialized(triple.a), triple.a.commit},
        VersionInput{triple.b.rev, materialized(triple.b), triple.b.commit}};
    TripleResult result = AnalyzeTriple(versions, config);
    outcome.live_conflicts += result.analysis.LiveCount();
    if (t > 0) report << '\n';
    report << "COMPARISON base=" << ShortId(triple.base.commit) << " a="
           << triple.a.rev << " (" << ShortId(triple.a.commit) << ") b="
           << triple.b.rev << " (" << ShortId(triple.b.commit) << ")\n"
           << result.report;
    for (const auto& w : result.changes1.warnings) outcome.warnings.push_back(w);
    for (const auto& w : result.changes2.warnings) outcome.warnings.push_back(w);
  }
  if (plan.triples.empty()) report << "NO COMPARISONS PLANNED\n";
  outcome.report = report.str();
  return outcome;
}

}  // namespace bdci
