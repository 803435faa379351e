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

// bdci: command-line front end.
//
//   bdci analyze --repo R --policy merge-request --a B1 --b B2 --tests CMD
//   bdci mine --traces DIR --points FILE --out FILE
//   bdci inject --spec FILE [--out FILE]
//
// Exit status: 0 no live conflicts (or success), 3 live conflicts found,
// 1 any error.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bdci/benchkit.h"
#include "bdci/error.h"
#include "bdci/miner.h"
#include "bdci/pipeline.h"
#include "bdci/scm.h"
#include "bdci/scoper.h"
#include "bdci/text.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConflicts = 3;

void Emit(const fs::path& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text << std::flush;
  } else {
    bdci::WriteFile(out, text);
  }
}

struct AnalyzeFlags {
  std::string repo = ".";
  std::string policy = "merge-request";
  std::string base, a, b, branches, tests, report, config, work_dir = ".bdci",
      trace_dir, suppress, sources;
  std::size_t min_samples = 5;
  std::uint64_t grid_budget = 1'000'000;
};

int RunAnalyze(const AnalyzeFlags& flags) {
  bdci::Config config;
  config.repo = flags.repo;
  config.policy = bdci::ParsePolicy(flags.policy);
  config.base = flags.base;
  config.a = flags.a;
  config.b = flags.b;
  config.branches = bdci::SplitList(flags.branches, ',');
  config.test_command = flags.tests;
  config.report = flags.report;
  config.work_dir = flags.work_dir;
  config.trace_dir = flags.trace_dir;
  config.min_samples = flags.min_samples;
  config.suppress = bdci::SplitList(flags.suppress, ',');
  config.grid_budget = flags.grid_budget;
  config.sources = bdci::SplitList(flags.sources, ',');
  if (!flags.config.empty()) {
    bdci::ApplyConfigText(config, bdci::ReadFile(flags.config));
  }
  bdci::ValidateConfig(config);
  if (config.policy == bdci::Policy::kMergeRequest &&
      (config.a.empty() || config.b.empty())) {
    throw bdci::Error(bdci::ErrorCode::kConfig,
                      "merge-request needs both --a and --b");
  }
  if (config.policy == bdci::Policy::kOnCommit && config.a.empty()) {
    throw bdci::Error(bdci::ErrorCode::kConfig,
                      "on-commit needs the committed revision in --a");
  }

  bdci::GitCli git(config.repo);
  bdci::AnalyzeOutcome outcome = bdci::AnalyzeRepository(git, config);
  for (const auto& warning : outcome.warnings) {
    std::cerr << "bdci: warning: " << warning << "\n";
  }
  Emit(config.report, outcome.report);
  return outcome.live_conflicts > 0 ? kExitConflicts : kExitOk;
}

int RunMine(const std::string& traces, const std::string& points_file,
            const std::string& out, std::size_t min_samples) {
  bdci::TraceLog trace = fs::is_directory(traces)
                             ? bdci::LoadTraceDirectory(traces)
                             : bdci::ReadTraceFile(traces);
  std::vector<bdci::ProgramPoint> points;
  try {
    points = bdci::ParsePointList(bdci::ReadFile(points_file));
  } catch (const bdci::ParseError& e) {
    throw bdci::ParseError(points_file + ": " + e.detail(), e.line());
  }
  bdci::MinerOptions options;
  options.min_samples = min_samples;
  if (min_samples < 2) {
    throw bdci::Error(bdci::ErrorCode::kConfig, "min_samples must be at least 2");
  }
  std::vector<bdci::PropertySet> sets = bdci::MineTrace(trace, points, options);
  for (const auto& set : sets) {
    for (const auto& warning : set.warnings) {
      std::cerr << "bdci: warning: " << set.point.Name() << ": " << warning
                << "\n";
    }
  }
  Emit(out, bdci::SerializeProperties(sets));
  return kExitOk;
}

int RunInject(const std::string& spec_file, const std::string& out,
              const std::string& work_dir, const std::string& config_file) {
  bdci::CampaignSpec spec;
  try {
    spec = bdci::LoadCampaignSpec(spec_file);
  } catch (const bdci::ParseError& e) {
    throw bdci::ParseError(spec_file + ": " + e.detail(), e.line());
  }
  bdci::Config config;
  config.work_dir = work_dir;
  if (!config_file.empty()) {
    bdci::ApplyConfigText(config, bdci::ReadFile(config_file));
  }
  if (!spec.test_command.empty()) config.test_command = spec.test_command;
  bdci::CampaignResult result = bdci::RunCampaign(spec, config);
  if (out.empty()) {
    std::cout << result.Table() << "\n" << result.Summary() << std::flush;
  } else {
    bdci::WriteFile(out, result.Table());
    std::cout << result.Summary() << std::flush;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Behavioral conflict detection across parallel branches"};
  app.require_subcommand(1);

  AnalyzeFlags af;
  CLI::App* analyze =
      app.add_subcommand("analyze", "Compare branches of a repository");
  analyze->add_option("--repo", af.repo, "Repository path")
      ->capture_default_str();
  analyze->add_option("--policy", af.policy,
                      "on-commit | merge-request | nightly")
      ->capture_default_str();
  analyze->add_option("--base", af.base, "Base revision (default: merge base)");
  analyze->add_option("--a", af.a, "First branch (the commit for on-commit)");
  analyze->add_option("--b", af.b, "Second branch");
  analyze->add_option("--branches", af.branches,
                      "Comma-separated branch heads (on-commit, nightly)");
  analyze->add_option("--tests", af.tests, "Test command template");
  analyze->add_option("--report", af.report, "Report file (default: stdout)");
  analyze->add_option("--config", af.config,
                      "key = value file; its values override flags");
  analyze->add_option("--work-dir", af.work_dir, "Scratch directory")
      ->capture_default_str();
  analyze->add_option("--trace-dir", af.trace_dir,
                      "Trace cache (default: <work-dir>/traces)");
  analyze->add_option("--min-samples", af.min_samples)->capture_default_str();
  analyze->add_option("--suppress", af.suppress,
                      "Comma-separated noise variables");
  analyze->add_option("--grid-budget", af.grid_budget)->capture_default_str();
  analyze->add_option("--sources", af.sources,
                      "Comma-separated source subdirectories to scope");

  std::string traces, points, mine_out;
  std::size_t mine_min_samples = 5;
  CLI::App* mine = app.add_subcommand("mine", "Mine properties from traces");
  mine->add_option("--traces", traces, "Trace directory or file")->required();
  mine->add_option("--points", points, "Monitored point list")->required();
  mine->add_option("--out", mine_out, "Property file (default: stdout)");
  mine->add_option("--min-samples", mine_min_samples)->capture_default_str();

  std::string spec, inject_out, inject_work = ".bdci", inject_config;
  CLI::App* inject = app.add_subcommand("inject", "Run a mutation campaign");
  inject->add_option("--spec", spec, "Campaign spec file")->required();
  inject->add_option("--out", inject_out, "TSV table (default: stdout)");
  inject->add_option("--work-dir", inject_work)->capture_default_str();
  inject->add_option("--config", inject_config, "key = value file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*analyze) return RunAnalyze(af);
    if (*mine) return RunMine(traces, points, mine_out, mine_min_samples);
    if (*inject) return RunInject(spec, inject_out, inject_work, inject_config);
  } catch (const bdci::Error& e) {
    std::cerr << "bdci: error (" << bdci::ErrorCodeName(e.code())
              << "): " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "bdci: error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
