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

// Conflict injection: three source mutation operators and a campaign runner
// that analyzes (base, branch 1, mutated branch 2) for every case.

#ifndef BDCI_BENCHKIT_H_
#define BDCI_BENCHKIT_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bdci/pipeline.h"

namespace bdci {

enum class MutationOperator {
  kSsdl,  // statement deletion
  kOcng,  // negate an if/while condition
  kCrcr,  // replace an integer literal
};

const char* OperatorName(MutationOperator op);
std::optional<MutationOperator> ParseOperator(std::string_view text);

struct MutationSpec {
  MutationOperator op = MutationOperator::kSsdl;
  std::string file;  // relative to the tree root
  int first_line = 0;
  int last_line = 0;
  std::uint64_t seed = 0;
};

struct Mutation {
  std::string source;
  int line = 0;  // line of the rewritten site
  std::string original;
  std::string replacement;
};

// Number of distinct rewrites the operator offers in the target range.
std::size_t CountMutations(std::string_view source, const MutationSpec& spec);

// Applies rewrite number `seed % CountMutations(...)`. Throws
// Error{kInapplicable} when the range is not inside one function or offers
// no site.
Mutation Mutate(std::string_view source, const MutationSpec& spec);

struct CampaignCase {
  std::string id;
  std::optional<MutationSpec> mutation;  // none: the unmutated base case
  std::optional<bool> expect_conflict;
};

// Text format:
//   # bdci campaign v1
//   shared <dir>        files common to all versions (optional)
//   base <dir>          overlays, relative to the spec file
//   branch1 <dir>
//   branch2 <dir>       the branch that receives the mutations
//   sources <d1,d2>     directories to scope (optional)
//   tests <command>     test command template
//   case <id> -
//   case <id> <SSDL|OCNG|CRCR> <file> <first>-<last> <seed> [expect=conflict|none]
struct CampaignSpec {
  std::filesystem::path root;
  std::string shared, base, branch1, branch2;
  std::vector<std::string> sources;
  std::string test_command;
  std::vector<CampaignCase> cases;
};

CampaignSpec ParseCampaignSpec(std::string_view text,
                               const std::filesystem::path& root);
CampaignSpec LoadCampaignSpec(const std::filesystem::path& file);

struct DeltaCounts {
  std::size_t same = 0, dropped = 0, added = 0;
};

struct CaseResult {
  std::string id;
  std::string op = "-";
  bool ok = false;
  std::array<std::size_t, 3> properties{};  // atoms per version
  DeltaCounts delta1, delta2;
  std::size_t changed1 = 0, changed2 = 0;   // CHANGED points per branch
  std::size_t conflicts = 0;                // live conflicts
  std::optional<bool> expect_conflict;
  std::size_t gaps = 0;
  bool values_altered = false;
  std::vector<std::string> lost_points;     // traced before, not after
  std::string note;
  std::string report;

  bool detected() const { return conflicts >= 1; }
};

struct CampaignResult {
  std::vector<CaseResult> cases;

  std::string Table() const;    // tab-separated, header first
  std::string Summary() const;  // human-readable
};

// Cases run one after another in <config.work_dir>/campaign. A failing case
// is recorded with ok=false and the campaign moves on.
CampaignResult RunCampaign(const CampaignSpec& spec, const Config& config);

}  // namespace bdci

#endif  // BDCI_BENCHKIT_H_
