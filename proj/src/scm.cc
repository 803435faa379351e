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

#include "bdci/scm.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <system_error>

#include "bdci/error.h"
#include "bdci/process.h"
#include "bdci/text.h"

namespace fs = std::filesystem;

namespace bdci {
namespace {

std::string FirstLine(const std::string& text) {
  auto lines = SplitLines(text);
  return lines.empty() ? std::string() : std::string(Trim(lines.front()));
}

std::string ToolText(const ProcessResult& r) {
  std::string text(Trim(r.err));
  if (text.empty()) text = std::string(Trim(r.out));
  if (text.empty()) text = "exit status " + std::to_string(r.exit_code);
  return text;
}

// Holds `<workdir>.lock` for the lifetime of one materialization.
class WorkdirLock {
 public:
  explicit WorkdirLock(const fs::path& workdir)
      : path_(workdir.string() + ".lock") {
    if (workdir.has_parent_path()) fs::create_directories(workdir.parent_path());
    fd_ = open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0) {
      throw Error(ErrorCode::kWorkdir,
                  "work directory " + workdir.string() +
                      " is locked (" + path_.string() + " exists)");
    }
  }
  ~WorkdirLock() {
    close(fd_);
    std::error_code ec;
    fs::remove(path_, ec);
  }
  WorkdirLock(const WorkdirLock&) = delete;
  WorkdirLock& operator=(const WorkdirLock&) = delete;

 private:
  fs::path path_;
  int fd_ = -1;
};

}  // namespace

GitCli::GitCli(fs::path repo, std::string executable)
    : repo_(std::move(repo)), git_(std::move(executable)) {}

std::string GitCli::DefaultExecutable() {
  const char* env = std::getenv("BDCI_GIT");
  return env != nullptr && *env != '\0' ? env : "git";
}

std::string GitCli::Resolve(const std::string& rev) {
  ProcessResult r = RunProcess({git_, "-C", repo_.string(), "rev-parse",
                                "--verify", "--quiet", rev + "^{commit}"});
  std::string sha = FirstLine(r.out);
  if (!r.ok() || sha.empty()) {
    throw Error(ErrorCode::kResolution,
                "cannot resolve revision '" + rev + "' in " + repo_.string());
  }
  return sha;
}

std::vector<std::string> GitCli::MergeBases(const std::string& a,
                                            const std::string& b) {
  ProcessResult r = RunProcess(
      {git_, "-C", repo_.string(), "merge-base", "--all", a, b});
  if (r.exit_code == 1 && Trim(r.out).empty()) return {};
  if (!r.ok()) {
    throw Error(ErrorCode::kTool, "git merge-base " + a + " " + b + ": " +
                                      ToolText(r));
  }
  std::vector<std::string> out;
  for (const auto& line : SplitLines(r.out)) {
    std::string sha(Trim(line));
    if (!sha.empty()) out.push_back(sha);
  }
  return out;
}

bool GitCli::IsAncestor(const std::string& ancestor,
                        const std::string& descendant) {
  ProcessResult r = RunProcess({git_, "-C", repo_.string(), "merge-base",
                                "--is-ancestor", ancestor, descendant});
  if (r.exit_code == 0) return true;
  if (r.exit_code == 1) return false;
  throw Error(ErrorCode::kTool, "git merge-base --is-ancestor: " + ToolText(r));
}

void GitCli::Export(const std::string& commit, const fs::path& dir) {
  fs::path tarball = dir.string() + ".tar";
  ProcessResult r =
      RunProcess({git_, "-C", repo_.string(), "archive", "--format=tar", "-o",
                  fs::absolute(tarball).string(), commit});
  if (!r.ok()) {
    std::error_code ec;
    fs::remove(tarball, ec);
    throw Error(ErrorCode::kTool, "git archive " + commit + ": " + ToolText(r));
  }
  ProcessResult x =
      RunProcess({"tar", "-xf", tarball.string(), "-C", dir.string()});
  std::error_code ec;
  fs::remove(tarball, ec);
  if (!x.ok()) {
    throw Error(ErrorCode::kTool, "tar: " + ToolText(x));
  }
}

VersionRef LatestCommonAncestor(VersionControl& vcs, const std::string& a,
                                const std::string& b,
                                std::vector<std::string>* warnings) {
  std::string ca = vcs.Resolve(a);
  std::string cb = vcs.Resolve(b);
  std::vector<std::string> bases = vcs.MergeBases(ca, cb);
  if (bases.empty()) {
    throw Error(ErrorCode::kNoAncestor,
                "no common ancestor for " + a + " and " + b);
  }
  if (bases.size() > 1 && warnings != nullptr) {
    warnings->push_back(std::to_string(bases.size()) +
                        " merge bases for " + a + " and " + b + "; using " +
                        bases.front());
  }
  return VersionRef{vcs.locator(), bases.front(), bases.front(),
                    RefRole::kBase};
}

TreeHandle Materialize(VersionControl& vcs, const std::string& rev,
                       const fs::path& workdir) {
  std::string commit = vcs.Resolve(rev);
  WorkdirLock lock(workdir);
  if (fs::exists(workdir)) {
    if (!fs::is_directory(workdir) || !fs::is_empty(workdir)) {
      throw Error(ErrorCode::kWorkdir,
                  "work directory " + workdir.string() + " is not empty");
    }
  } else {
    fs::create_directories(workdir);
  }
  vcs.Export(commit, workdir);
  return TreeHandle{rev, commit, workdir};
}

Policy ParsePolicy(std::string_view text) {
  if (text == "on-commit") return Policy::kOnCommit;
  if (text == "merge-request") return Policy::kMergeRequest;
  if (text == "nightly") return Policy::kNightly;
  throw Error(ErrorCode::kConfig,
              "unknown policy '" + std::string(text) +
                  "' (expected on-commit, merge-request or nightly)");
}

const char* PolicyName(Policy policy) {
  switch (policy) {
    case Policy::kOnCommit: return "on-commit";
    case Policy::kMergeRequest: return "merge-request";
    case Policy::kNightly: return "nightly";
  }
  return "?";
}

ComparisonPlan PlanComparisons(VersionControl& vcs,
                               const PolicyRequest& request,
                               const std::vector<std::string>& branches) {
  if (branches.empty()) throw Error(ErrorCode::kPlan, "no branches given");
  auto require_member = [&](const std::string& rev) {
    if (std::find(branches.begin(), branches.end(), rev) == branches.end()) {
      throw Error(ErrorCode::kPlan,
                  "revision '" + rev + "' is not one of the branches");
    }
  };

  ComparisonPlan plan;
  auto branch_ref = [&](const std::string& rev) {
    return VersionRef{vcs.locator(), rev, vcs.Resolve(rev), RefRole::kBranch};
  };
  auto add = [&](const std::string& a, const std::string& b) {
    ComparisonTriple triple;
    triple.a = branch_ref(a);
    triple.b = branch_ref(b);
    if (request.base) {
      triple.base = VersionRef{vcs.locator(), *request.base,
                               vcs.Resolve(*request.base), RefRole::kBase};
      for (const VersionRef* side : {&triple.a, &triple.b}) {
        if (!vcs.IsAncestor(triple.base.commit, side->commit)) {
          throw Error(ErrorCode::kPlan, "base " + *request.base +
                                            " is not an ancestor of " +
                                            side->rev);
        }
      }
    } else {
      triple.base = LatestCommonAncestor(vcs, a, b, &plan.warnings);
    }
    plan.triples.push_back(std::move(triple));
  };

  switch (request.policy) {
    case Policy::kOnCommit:
      require_member(request.committed);
      for (const auto& other : branches) {
        if (other != request.committed) add(request.committed, other);
      }
      break;
    case Policy::kMergeRequest:
      require_member(request.a);
      require_member(request.b);
      add(request.a, request.b);
      break;
    case Policy::kNightly:
      for (std::size_t i = 0; i < branches.size(); ++i) {
        for (std::size_t j = i + 1; j < branches.size(); ++j) {
          add(branches[i], branches[j]);
        }
      }
      break;
  }
  return plan;
}

}  // namespace bdci
