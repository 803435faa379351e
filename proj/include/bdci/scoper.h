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

// Change scoping: which functions differ between two source trees, who calls
// them, and which program points therefore need tracing.

#ifndef BDCI_SCOPER_H_
#define BDCI_SCOPER_H_

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bdci/trace.h"

namespace bdci {

struct FunctionSpan {
  std::string name;
  std::string file;
  int start_line = 0;  // first line of the declaration, 1-based
  int end_line = 0;    // line of the closing brace, inclusive
  std::string signature;  // return and parameter types, names stripped
  // Byte range of the body, from '{' through the matching '}'.
  std::size_t body_begin = 0;
  std::size_t body_end = 0;
};

struct ExtractResult {
  std::vector<FunctionSpan> functions;
  std::vector<std::string> warnings;
};

ExtractResult ExtractFunctions(std::string_view source,
                               const std::string& file);

// One contiguous edit. Starts are 1-based; an empty side has count 0 and
// its start is the line the edit sits after.
struct DiffHunk {
  int base_start = 0;
  int base_count = 0;
  int version_start = 0;
  int version_count = 0;
};

// Minimal line diff (Myers).
std::vector<DiffHunk> DiffLines(const std::vector<std::string>& base,
                                const std::vector<std::string>& version);

// Source files keyed by path relative to the tree root ('/' separated).
struct SourceTree {
  std::map<std::string, std::string> files;

  // Reads C-like sources (.c .h .cc .cpp .hpp .cxx) below `root`, limited to
  // the given subdirectories when `subdirs` is non-empty. Missing subdirs
  // are skipped. Throws Error{kIo} naming an unreadable file.
  static SourceTree Load(const std::filesystem::path& root,
                         const std::vector<std::string>& subdirs = {});
};

struct OutsideLine {
  std::string file;
  int line = 0;
  bool in_base = false;  // deleted from the base tree, or added in version
};

struct FunctionChanges {
  std::set<std::string> changed;
  std::set<std::string> signature_changed;
  std::vector<OutsideLine> outside;  // changed lines not inside any function
  std::vector<std::string> warnings;
};

FunctionChanges ChangedFunctions(const SourceTree& base,
                                 const SourceTree& version);

class CallGraph {
 public:
  void AddNode(const std::string& name) { nodes_.insert(name); }
  void AddEdge(const std::string& caller, const std::string& callee);
  void Merge(const CallGraph& other);

  const std::set<std::string>& nodes() const { return nodes_; }
  const std::set<std::pair<std::string, std::string>>& edges() const {
    return edges_;
  }
  std::set<std::string> Callers(const std::string& name) const;
  std::set<std::string> Callees(const std::string& name) const;

 private:
  std::set<std::string> nodes_;
  std::set<std::pair<std::string, std::string>> edges_;
};

// u -> v whenever `v (` appears in u's body and v is defined in the tree.
CallGraph BuildCallGraph(const SourceTree& tree);

// ENTER/EXIT points of the changed functions and their direct callers and
// callees. Signature-changed functions contribute neighbours only.
std::vector<ProgramPoint> MonitoredSet(
    const std::set<std::string>& changed, const CallGraph& graph,
    const std::set<std::string>& signature_changed = {});

// One rendered point name per line.
std::string FormatPointList(const std::vector<ProgramPoint>& points);
std::vector<ProgramPoint> ParsePointList(std::string_view text);

}  // namespace bdci

#endif  // BDCI_SCOPER_H_
