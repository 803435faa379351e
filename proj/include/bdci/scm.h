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

// Version selection: which (base, a, b) triples to compare for a trigger
// policy, and how to get the committed tree of a revision onto disk.
//
// Repository access goes through the VersionControl interface. GitCli is
// the only implementation and shells out to a git executable.

#ifndef BDCI_SCM_H_
#define BDCI_SCM_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bdci {

class VersionControl {
 public:
  virtual ~VersionControl() = default;

  virtual std::string locator() const = 0;
  // Full commit id for a revision expression. Throws Error{kResolution}.
  virtual std::string Resolve(const std::string& rev) = 0;
  // Merge-base candidates in the order the tool reports them; empty for
  // unrelated histories.
  virtual std::vector<std::string> MergeBases(const std::string& a,
                                              const std::string& b) = 0;
  virtual bool IsAncestor(const std::string& ancestor,
                          const std::string& descendant) = 0;
  // Writes the committed tree of `commit` into the existing directory
  // `dir`. Throws Error{kTool} carrying the tool's error text.
  virtual void Export(const std::string& commit,
                      const std::filesystem::path& dir) = 0;
};

// Adapter contract (all invoked as `<git> -C <repo> ...`):
//   rev-parse --verify --quiet <rev>^{commit}  -> one 40-hex line, exit 0
//   merge-base --all <a> <b>                   -> one commit per line; exit 1
//                                                 and no output if unrelated
//   merge-base --is-ancestor <x> <y>           -> exit 0 yes, 1 no
//   archive --format=tar -o <file> <commit>    -> tarball, unpacked with tar
class GitCli : public VersionControl {
 public:
  explicit GitCli(std::filesystem::path repo,
                  std::string executable = DefaultExecutable());

  // $BDCI_GIT when set, otherwise `git` from PATH.
  static std::string DefaultExecutable();

  std::string locator() const override { return repo_.string(); }
  std::string Resolve(const std::string& rev) override;
  std::vector<std::string> MergeBases(const std::string& a,
                                      const std::string& b) override;
  bool IsAncestor(const std::string& ancestor,
                  const std::string& descendant) override;
  void Export(const std::string& commit,
              const std::filesystem::path& dir) override;

 private:
  std::filesystem::path repo_;
  std::string git_;
};

enum class RefRole { kBase, kBranch };

struct VersionRef {
  std::string repo;
  std::string rev;     // as given (branch name, tag, sha, ...)
  std::string commit;  // resolved id
  RefRole role = RefRole::kBranch;

  bool operator==(const VersionRef&) const = default;
};

// The merge base reported by the tool. With several candidates the first
// wins and a warning is appended. Throws Error{kNoAncestor} for unrelated
// histories.
VersionRef LatestCommonAncestor(VersionControl& vcs, const std::string& a,
                                const std::string& b,
                                std::vector<std::string>* warnings = nullptr);

struct TreeHandle {
  std::string rev;
  std::string commit;
  std::filesystem::path path;
};

// Requires `workdir` to be absent or empty and not locked by a concurrent
// materialization (`<workdir>.lock`). Throws Error{kWorkdir} otherwise.
TreeHandle Materialize(VersionControl& vcs, const std::string& rev,
                       const std::filesystem::path& workdir);

enum class Policy { kOnCommit, kMergeRequest, kNightly };

// Accepts on-commit, merge-request and nightly.
Policy ParsePolicy(std::string_view text);
const char* PolicyName(Policy policy);

struct PolicyRequest {
  Policy policy = Policy::kNightly;
  std::string committed;  // kOnCommit
  std::string a, b;       // kMergeRequest
  std::optional<std::string> base;  // overrides the computed ancestor
};

struct ComparisonTriple {
  VersionRef base, a, b;
};

struct ComparisonPlan {
  std::vector<ComparisonTriple> triples;
  std::vector<std::string> warnings;
};

// Triples in branch-list order. Throws Error{kPlan} when a revision named by
// the request is not one of `branches` or when `branches` is empty.
ComparisonPlan PlanComparisons(VersionControl& vcs,
                               const PolicyRequest& request,
                               const std::vector<std::string>& branches);

}  // namespace bdci

#endif  // BDCI_SCM_H_
