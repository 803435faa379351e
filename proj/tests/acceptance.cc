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

// Acceptance checks A1-A7. Prints one PASS/FAIL line per criterion and
// exits non-zero when any of them fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bdci/analyzer.h"
#include "bdci/benchkit.h"
#include "bdci/condition.h"
#include "bdci/miner.h"
#include "bdci/pipeline.h"
#include "bdci/process.h"
#include "bdci/text.h"
#include "bdci/trace.h"
#include "random_conditions.h"
#include "test_support.h"

namespace bdci {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

const fs::path kSource = BDCI_SOURCE_DIR;
const fs::path kCorpus = kSource / "corpus" / "running_example";
const fs::path kFixtures = kSource / "tests" / "fixtures";

struct Outcome {
  bool pass = true;
  std::string detail;

  void Fail(const std::string& why) {
    if (!pass) {
      detail += "; ";
    } else {
      detail.clear();
    }
    pass = false;
    detail += why;
  }
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Secs(double seconds) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", seconds);
  return buf;
}

ProgramPoint Exit(const std::string& function) {
  return ProgramPoint{function, PointKind::kExit};
}

bool HasAtom(const Condition& c, const std::string& atom_text) {
  Atom wanted = ParseCondition(atom_text).atoms().at(0).Canonical();
  for (const Atom& a : c.atoms()) {
    if (a.Canonical() == wanted) return true;
  }
  return false;
}

VersionInput Assemble(const std::string& version, const fs::path& dest) {
  OverlayTree(kCorpus / "common", dest);
  OverlayTree(kCorpus / version, dest);
  return VersionInput{version, dest, TreeHash(dest)};
}

// Running example, mined once and shared by A1 and A2.
struct RunningExample {
  testing::TempDir dir;
  TripleResult result;
  double seconds = 0;
};

RunningExample& Corpus() {
  static RunningExample ex;
  static bool analyzed = false;
  if (!analyzed) {
    auto start = Clock::now();
    std::array<VersionInput, 3> versions{
        Assemble("base", ex.dir / "base"),
        Assemble("version1", ex.dir / "v1"),
        Assemble("version2", ex.dir / "v2")};
    Config config;
    config.work_dir = ex.dir / "work";
    config.test_command = "sh run_tests.sh";
    config.sources = {"src"};
    ex.result = AnalyzeTriple(versions, config);
    ex.seconds = Seconds(start);
    analyzed = true;
  }
  return ex;
}

Outcome CheckA1() {
  Outcome out;
  RunningExample& ex = Corpus();
  struct Cell {
    int version;
    const char* function;
    const char* atom;
  };
  // Version 1 and 2 inherit the base atoms of the function they leave
  // untouched.
  const Cell cells[] = {
      {0, "getTotalPrice", "(> return price)"},
      {0, "getDiscountedPrice", "(< return price)"},
      {0, "getSaving", "(> return 10)"},
      {1, "getTotalPrice", "(> return price)"},
      {1, "getDiscountedPrice", "(<= return price)"},
      {1, "getSaving", "(>= return 0)"},
      {2, "getTotalPrice", "(>= return price)"},
      {2, "getDiscountedPrice", "(< return price)"},
      {2, "getSaving", "(>= return 10)"},
  };
  int found = 0;
  for (const Cell& cell : cells) {
    const PropertyMap& props = ex.result.properties[cell.version];
    auto it = props.find(Exit(cell.function));
    if (it == props.end() || !HasAtom(it->second.condition, cell.atom)) {
      out.Fail("v" + std::to_string(cell.version) + " " + cell.function +
               "_EXIT lacks " + cell.atom);
    } else {
      ++found;
    }
  }
  if (ex.seconds >= 10) out.Fail("took " + Secs(ex.seconds));
  if (out.pass) {
    out.detail = std::to_string(found) + "/9 atoms, " +
                 Secs(ex.seconds);
  }
  return out;
}

Outcome CheckA2() {
  Outcome out;
  const ConflictAnalysis& a = Corpus().result.analysis;
  auto changed = [](const ChangeSet& set, const char* function) {
    auto it = set.find(Exit(function));
    return it != set.end() && it->second.status == ChangeStatus::kChanged;
  };
  if (a.LiveCount() != 1) {
    out.Fail(std::to_string(a.LiveCount()) + " live conflicts");
  }
  for (const ConflictReport& r : a.reports) {
    if (r.live() && r.point != Exit("getSaving")) {
      out.Fail("live conflict at " + r.point.Name());
    }
  }
  if (!changed(a.changes1, "getDiscountedPrice") ||
      changed(a.changes2, "getDiscountedPrice")) {
    out.Fail("getDiscountedPrice_EXIT not changed by branch 1 alone");
  }
  if (!changed(a.changes2, "getTotalPrice") ||
      changed(a.changes1, "getTotalPrice")) {
    out.Fail("getTotalPrice_EXIT not changed by branch 2 alone");
  }
  if (out.pass) out.detail = "1 live conflict at getSaving_EXIT";
  return out;
}

PropertyMap MinePort(const std::string& version) {
  TraceLog log = ReadTraceFile(kFixtures / "port" / (version + ".trace"));
  return ToPropertyMap(MineTrace(log, PointsOf(log)));
}

Outcome CheckA3() {
  Outcome out;
  std::map<std::string, PropertyMap> mined;
  for (const char* v : {"v1", "v2", "v3", "v4", "v5"}) mined[v] = MinePort(v);
  const ProgramPoint enter{"accept_port", PointKind::kEnter};
  const std::pair<const char*, const char*> bounds[] = {
      {"v1", "(> port 0)"}, {"v2", "(> port 0)"}, {"v3", "(>= port 0)"},
      {"v4", "(> port 1)"}, {"v5", "(> port 1)"}};
  for (const auto& [v, atom] : bounds) {
    if (!HasAtom(mined[v].at(enter).condition, atom)) {
      out.Fail(std::string(v) + " lacks " + atom);
    }
  }
  ConflictAnalysis vs2 = DetectConflicts(mined["v1"], mined["v5"], mined["v2"]);
  if (!vs2.reports.empty()) out.Fail("v5 vs v2 reported a conflict");
  ConflictAnalysis vs4 = DetectConflicts(mined["v1"], mined["v5"], mined["v4"]);
  if (vs4.reports.size() != 1 ||
      vs4.reports[0].suppression != Suppression::kEquivalent) {
    out.Fail("v5 vs v4 not suppressed as equivalent");
  }
  ConflictAnalysis vs3 = DetectConflicts(mined["v1"], mined["v5"], mined["v3"]);
  if (vs3.LiveCount() != 1) out.Fail("v5 vs v3 not a live conflict");
  if (out.pass) out.detail = "v2 none, v4 suppressed, v3 live";
  return out;
}

Outcome CheckA4() {
  Outcome out;
  auto start = Clock::now();
  std::mt19937_64 rng(20260415);
  std::uniform_int_distribution<int> var_count(1, 3);
  std::uniform_int_distribution<int> mode(0, 3);
  int disagreements = 0, bad_witnesses = 0, equivalent = 0;
  std::string first_problem;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::string> vars;
    for (int i = var_count(rng); i > 0; --i) {
      vars.push_back(std::string(1, static_cast<char>('x' + vars.size())));
    }
    Condition a = testing::RandomCondition(rng, vars, 5);
    Condition b;
    // Mostly independent pairs, plus pairs built from `a` so that the
    // equivalent side of the decision gets exercised too.
    switch (mode(rng)) {
      case 0: {
        std::vector<Atom> atoms = a.atoms();
        std::shuffle(atoms.begin(), atoms.end(), rng);
        b = Condition(atoms);
        break;
      }
      case 1: {
        std::vector<Atom> atoms = a.atoms();
        if (atoms.size() < 5) {
          atoms.push_back(testing::RandomAtom(rng, vars, -10, 10));
        }
        b = Condition(atoms);
        break;
      }
      default:
        b = testing::RandomCondition(rng, vars, 5);
    }
    bool brute = true;
    testing::ForEachBoxPoint(vars, -12, 12, [&](const Assignment& p) {
      if (brute && a.Evaluate(p) != b.Evaluate(p)) brute = false;
    });
    EquivVerdict v = Equivalent(a, b);
    bool engine = v.result == EquivVerdict::Result::kEquivalent;
    if (engine) ++equivalent;
    if (engine != brute) {
      ++disagreements;
      if (first_problem.empty()) {
        first_problem = Serialize(a) + " vs " + Serialize(b);
      }
    }
    if (v.result == EquivVerdict::Result::kNotEquivalent &&
        (!v.witness || a.Evaluate(*v.witness) == b.Evaluate(*v.witness))) {
      ++bad_witnesses;
    }
  }
  double seconds = Seconds(start);
  if (disagreements > 0) {
    out.Fail(std::to_string(disagreements) + " disagreements, first: " +
             first_problem);
  }
  if (bad_witnesses > 0) {
    out.Fail(std::to_string(bad_witnesses) + " invalid witnesses");
  }
  if (seconds >= 30) out.Fail("took " + Secs(seconds));
  if (out.pass) {
    out.detail = "1000 pairs (" + std::to_string(equivalent) +
                 " equivalent), " + Secs(seconds);
  }
  return out;
}

PropertyMap LoadProps(const fs::path& file) {
  return ToPropertyMap(ParseProperties(ReadFile(file)));
}

Outcome CheckA5() {
  Outcome out;
  const char* cases[] = {"redis_case76", "git_case131", "git_case1357",
                         "git_case171", "port_equivalent"};
  for (const char* name : cases) {
    fs::path dir = kFixtures / "reports" / name;
    ConflictAnalysis a = DetectConflicts(LoadProps(dir / "base.props"),
                                         LoadProps(dir / "branch1.props"),
                                         LoadProps(dir / "branch2.props"));
    if (RenderReport(a) != ReadFile(dir / "expected.txt")) {
      out.Fail(std::string(name) + " differs from golden");
    }
  }
  if (out.pass) out.detail = "5 golden reports byte-exact";
  return out;
}

Outcome CheckA6() {
  Outcome out;
  testing::TempDir work;
  auto start = Clock::now();
  CampaignSpec spec = LoadCampaignSpec(kCorpus / "campaign.spec");
  Config config;
  config.work_dir = work.path();
  CampaignResult result = RunCampaign(spec, config);
  double seconds = Seconds(start);
  std::size_t altered = 0, lost = 0;
  std::set<std::string> ops;
  for (const CaseResult& c : result.cases) {
    if (!c.ok) {
      out.Fail(c.id + " errored: " + c.note);
      continue;
    }
    ops.insert(c.op);
    if (c.op == "-" && c.conflicts != 0) {
      out.Fail("base case reports " + std::to_string(c.conflicts));
    }
    if (c.values_altered) {
      ++altered;
      if (c.conflicts == 0) out.Fail(c.id + " altered values undetected");
    }
    if (!c.lost_points.empty()) {
      ++lost;
      if (c.gaps == 0) out.Fail(c.id + " lost coverage without a gap");
    }
  }
  if (!ops.count("-")) out.Fail("no base case");
  if (altered == 0) out.Fail("no case altered values");
  if (lost == 0) out.Fail("no case lost coverage");
  if (seconds >= 120) out.Fail("took " + Secs(seconds));
  if (out.pass) {
    out.detail = std::to_string(result.cases.size()) + " cases, " +
                 std::to_string(altered) + " value-altering detected, " +
                 std::to_string(lost) + " coverage losses gapped, " +
                 Secs(seconds);
  }
  return out;
}

Outcome CheckA7() {
  Outcome out;
  const char* binaries[] = {BDCI_PROPERTY_BINARIES};
  int suites = 0;
  for (const char* binary : binaries) {
    ProcessResult r = RunProcess(
        {binary, "--gtest_filter=*Propert*", "--gtest_brief=1"}, {});
    ++suites;
    if (!r.ok()) {
      out.Fail(fs::path(binary).filename().string() + " exit " +
               std::to_string(r.exit_code));
    }
  }
  if (out.pass) out.detail = std::to_string(suites) + " property suites green";
  return out;
}

int Main() {
  const std::pair<const char*, std::function<Outcome()>> checks[] = {
      {"A1", CheckA1}, {"A2", CheckA2}, {"A3", CheckA3}, {"A4", CheckA4},
      {"A5", CheckA5}, {"A6", CheckA6}, {"A7", CheckA7}};
  int failures = 0;
  for (const auto& [name, check] : checks) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.Fail(std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failures;
    std::printf("%s %s %s\n", name, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace bdci

int main() { return bdci::Main(); }
