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

#include "bdci/scoper.h"

#include <algorithm>
#include <optional>
#include <set>
#include <system_error>

#include "bdci/clex.h"
#include "bdci/error.h"
#include "bdci/text.h"

namespace bdci {

namespace {

bool IsStorageWord(std::string_view w) {
  return w == "static" || w == "extern" || w == "inline" ||
         w == "register" || w == "__inline" || w == "__inline__";
}

bool IsQualifier(std::string_view w) {
  return w == "const" || w == "volatile" || w == "restrict";
}

bool WordLike(const CToken& t) {
  return t.kind == CToken::Kind::kIdentifier ||
         t.kind == CToken::Kind::kNumber;
}

std::string JoinTokens(const std::vector<CToken>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0 && WordLike(tokens[i - 1]) && WordLike(tokens[i])) out += ' ';
    out += tokens[i].text;
  }
  return out;
}

// Drops the declarator name from one parameter, if it has one.
std::vector<CToken> StripParameterName(std::vector<CToken> param) {
  for (std::size_t i = param.size(); i-- > 1;) {
    const CToken& t = param[i];
    if (t.kind != CToken::Kind::kIdentifier || IsCKeyword(t.text)) continue;
    std::string_view prev = param[i - 1].text;
    if (prev == "struct" || prev == "union" || prev == "enum") return param;
    bool typed = std::any_of(param.begin(), param.begin() + i,
                             [](const CToken& before) {
                               return before.kind ==
                                          CToken::Kind::kIdentifier &&
                                      !IsQualifier(before.text);
                             });
    if (typed) param.erase(param.begin() + i);
    return param;
  }
  return param;
}

std::string Signature(const std::vector<CToken>& tokens, std::size_t begin,
                      std::size_t open, std::size_t close) {
  std::vector<CToken> ret;
  for (std::size_t i = begin; i + 1 < open; ++i) {
    if (!IsStorageWord(tokens[i].text)) ret.push_back(tokens[i]);
  }
  std::vector<std::string> params;
  std::vector<CToken> current;
  int depth = 0;
  for (std::size_t i = open + 1; i < close; ++i) {
    const CToken& t = tokens[i];
    if (t.Is("(") || t.Is("[")) ++depth;
    if (t.Is(")") || t.Is("]")) --depth;
    if (depth == 0 && t.Is(",")) {
      params.push_back(JoinTokens(StripParameterName(current)));
      current.clear();
      continue;
    }
    current.push_back(t);
  }
  if (!current.empty()) {
    params.push_back(JoinTokens(StripParameterName(current)));
  }
  return JoinTokens(ret) + "(" + Join(params, ",") + ")";
}

// Index of the '(' opening the parameter list when tokens[begin, brace)
// look like a function definition header.
std::optional<std::size_t> FunctionHeader(const std::vector<CToken>& tokens,
                                          std::size_t begin,
                                          std::size_t brace) {
  if (brace <= begin + 2 || !tokens[brace - 1].Is(")")) return std::nullopt;
  int depth = 0;
  std::size_t open = brace - 1;
  for (std::size_t i = brace; i-- > begin;) {
    if (tokens[i].Is(")")) ++depth;
    if (tokens[i].Is("(") && --depth == 0) {
      open = i;
      break;
    }
  }
  if (depth != 0 || open == begin) return std::nullopt;
  const CToken& name = tokens[open - 1];
  if (name.kind != CToken::Kind::kIdentifier || IsCKeyword(name.text)) {
    return std::nullopt;
  }
  for (std::size_t i = begin; i < open; ++i) {
    if (tokens[i].Is("=") || tokens[i].Is("(")) return std::nullopt;
  }
  return open;
}

struct ExtractedFile {
  std::vector<FunctionSpan> spans;
  std::vector<std::string> warnings;
};

const FunctionSpan* SpanAt(const std::vector<FunctionSpan>& spans, int line) {
  for (const FunctionSpan& s : spans) {
    if (s.start_line <= line && line <= s.end_line) return &s;
  }
  return nullptr;
}

}  // namespace

ExtractResult ExtractFunctions(std::string_view source,
                               const std::string& file) {
  ExtractResult result;
  std::vector<CToken> tokens = LexC(source);
  std::size_t header = 0;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const CToken& t = tokens[i];
    if (t.Is(";")) {
      header = ++i;
      continue;
    }
    if (t.Is("}")) {
      result.warnings.push_back(file + ":" + std::to_string(t.line) +
                                ": unmatched '}'");
      header = ++i;
      continue;
    }
    if (!t.Is("{")) {
      ++i;
      continue;
    }
    // `extern "C" {` wraps definitions rather than being one.
    if (i >= header + 2 && tokens[i - 2].text == "extern" &&
        tokens[i - 1].kind == CToken::Kind::kString) {
      header = ++i;
      continue;
    }
    std::size_t close = MatchingClose(tokens, i);
    if (close == tokens.size()) {
      result.warnings.push_back(file + ":" + std::to_string(t.line) +
                                ": unbalanced braces; rest of file unmapped");
      break;
    }
    if (auto open = FunctionHeader(tokens, header, i)) {
      FunctionSpan span;
      span.name = std::string(tokens[*open - 1].text);
      span.file = file;
      span.start_line = tokens[header].line;
      span.end_line = tokens[close].line;
      span.signature = Signature(tokens, header, *open, i - 1);
      span.body_begin = t.offset;
      span.body_end = tokens[close].offset + 1;
      result.functions.push_back(std::move(span));
      header = close + 1;
    }
    i = close + 1;
  }
  return result;
}

std::vector<DiffHunk> DiffLines(const std::vector<std::string>& a,
                                const std::vector<std::string>& b) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  const int max = n + m;
  const int offset = max + 1;
  std::vector<int> v(2 * max + 3, 0);
  std::vector<std::vector<int>> trace;
  int depth = -1;
  for (int d = 0; d <= max && depth < 0; ++d) {
    trace.push_back(v);
    for (int k = -d; k <= d; k += 2) {
      int x = (k == -d || (k != d && v[offset + k - 1] < v[offset + k + 1]))
                  ? v[offset + k + 1]
                  : v[offset + k - 1] + 1;
      int y = x - k;
      while (x < n && y < m && a[x] == b[y]) {
        ++x;
        ++y;
      }
      v[offset + k] = x;
      if (x >= n && y >= m) {
        depth = d;
        break;
      }
    }
  }

  enum class Op { kEqual, kDelete, kInsert };
  std::vector<Op> ops;
  int x = n;
  int y = m;
  for (int d = depth; d > 0; --d) {
    const std::vector<int>& pv = trace[d];
    int k = x - y;
    int prev_k = (k == -d || (k != d && pv[offset + k - 1] < pv[offset + k + 1]))
                     ? k + 1
                     : k - 1;
    int prev_x = pv[offset + prev_k];
    int prev_y = prev_x - prev_k;
    while (x > prev_x && y > prev_y) {
      ops.push_back(Op::kEqual);
      --x;
      --y;
    }
    ops.push_back(x == prev_x ? Op::kInsert : Op::kDelete);
    x = prev_x;
    y = prev_y;
  }
  while (x > 0 && y > 0) {
    ops.push_back(Op::kEqual);
    --x;
    --y;
  }
  std::reverse(ops.begin(), ops.end());

  std::vector<DiffHunk> hunks;
  int ai = 0;
  int bi = 0;
  for (std::size_t i = 0; i < ops.size();) {
    if (ops[i] == Op::kEqual) {
      ++ai;
      ++bi;
      ++i;
      continue;
    }
    DiffHunk h;
    h.base_start = ai + 1;
    h.version_start = bi + 1;
    for (; i < ops.size() && ops[i] != Op::kEqual; ++i) {
      if (ops[i] == Op::kDelete) {
        ++h.base_count;
        ++ai;
      } else {
        ++h.version_count;
        ++bi;
      }
    }
    if (h.base_count == 0) --h.base_start;
    if (h.version_count == 0) --h.version_start;
    hunks.push_back(h);
  }
  return hunks;
}

SourceTree SourceTree::Load(const std::filesystem::path& root,
                            const std::vector<std::string>& subdirs) {
  namespace fs = std::filesystem;
  static const std::set<std::string> kExtensions = {".c", ".h",   ".cc",
                                                    ".cpp", ".hpp", ".cxx"};
  SourceTree tree;
  std::vector<fs::path> roots;
  if (subdirs.empty()) {
    roots.push_back(root);
  } else {
    for (const std::string& s : subdirs) roots.push_back(root / s);
  }
  for (const fs::path& dir : roots) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) continue;
    for (auto it = fs::recursive_directory_iterator(dir);
         it != fs::recursive_directory_iterator(); ++it) {
      if (it->is_directory() && it->path().filename() == ".git") {
        it.disable_recursion_pending();
        continue;
      }
      if (!it->is_regular_file()) continue;
      if (!kExtensions.count(it->path().extension().string())) continue;
      std::string rel = fs::relative(it->path(), root).generic_string();
      tree.files[rel] = ReadFile(it->path());
    }
  }
  return tree;
}

FunctionChanges ChangedFunctions(const SourceTree& base,
                                 const SourceTree& version) {
  FunctionChanges result;
  std::set<std::string> paths;
  for (const auto& [path, text] : base.files) paths.insert(path);
  for (const auto& [path, text] : version.files) paths.insert(path);

  std::map<std::string, std::string> base_sigs;
  std::map<std::string, std::string> version_sigs;
  static const std::string kEmpty;
  for (const std::string& path : paths) {
    auto bi = base.files.find(path);
    auto vi = version.files.find(path);
    const std::string& btext = bi == base.files.end() ? kEmpty : bi->second;
    const std::string& vtext = vi == version.files.end() ? kEmpty : vi->second;
    ExtractResult bspans = ExtractFunctions(btext, path);
    ExtractResult vspans = ExtractFunctions(vtext, path);
    for (const FunctionSpan& s : bspans.functions) {
      base_sigs.emplace(s.name, s.signature);
    }
    for (const FunctionSpan& s : vspans.functions) {
      version_sigs.emplace(s.name, s.signature);
    }
    for (auto* w : {&bspans.warnings, &vspans.warnings}) {
      result.warnings.insert(result.warnings.end(), w->begin(), w->end());
    }
    if (btext == vtext) continue;
    for (const DiffHunk& h : DiffLines(SplitLines(btext), SplitLines(vtext))) {
      for (int l = h.base_start; l < h.base_start + h.base_count; ++l) {
        if (const FunctionSpan* s = SpanAt(bspans.functions, l)) {
          result.changed.insert(s->name);
        } else {
          result.outside.push_back({path, l, true});
        }
      }
      for (int l = h.version_start; l < h.version_start + h.version_count;
           ++l) {
        if (const FunctionSpan* s = SpanAt(vspans.functions, l)) {
          result.changed.insert(s->name);
        } else {
          result.outside.push_back({path, l, false});
        }
      }
    }
  }
  for (const auto& [name, sig] : base_sigs) {
    auto it = version_sigs.find(name);
    if (it != version_sigs.end() && it->second != sig) {
      result.signature_changed.insert(name);
      result.changed.insert(name);
    }
  }
  return result;
}

void CallGraph::AddEdge(const std::string& caller, const std::string& callee) {
  nodes_.insert(caller);
  nodes_.insert(callee);
  edges_.emplace(caller, callee);
}

void CallGraph::Merge(const CallGraph& other) {
  nodes_.insert(other.nodes_.begin(), other.nodes_.end());
  edges_.insert(other.edges_.begin(), other.edges_.end());
}

std::set<std::string> CallGraph::Callers(const std::string& name) const {
  std::set<std::string> out;
  for (const auto& [from, to] : edges_) {
    if (to == name) out.insert(from);
  }
  return out;
}

std::set<std::string> CallGraph::Callees(const std::string& name) const {
  std::set<std::string> out;
  for (const auto& [from, to] : edges_) {
    if (from == name) out.insert(to);
  }
  return out;
}

CallGraph BuildCallGraph(const SourceTree& tree) {
  CallGraph graph;
  std::vector<std::pair<const std::string*, FunctionSpan>> all;
  for (const auto& [path, text] : tree.files) {
    for (FunctionSpan& span : ExtractFunctions(text, path).functions) {
      graph.AddNode(span.name);
      all.emplace_back(&text, std::move(span));
    }
  }
  for (const auto& [text, span] : all) {
    std::string_view body = std::string_view(*text).substr(
        span.body_begin, span.body_end - span.body_begin);
    std::vector<CToken> tokens = LexC(body);
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
      if (tokens[i].kind != CToken::Kind::kIdentifier ||
          !tokens[i + 1].Is("(")) {
        continue;
      }
      std::string callee(tokens[i].text);
      if (graph.nodes().count(callee)) graph.AddEdge(span.name, callee);
    }
  }
  return graph;
}

std::vector<ProgramPoint> MonitoredSet(
    const std::set<std::string>& changed, const CallGraph& graph,
    const std::set<std::string>& signature_changed) {
  std::set<std::string> functions;
  for (const std::string& f : changed) {
    functions.insert(f);
    for (const std::string& g : graph.Callers(f)) functions.insert(g);
    for (const std::string& g : graph.Callees(f)) functions.insert(g);
  }
  std::vector<ProgramPoint> out;
  for (const std::string& f : functions) {
    if (signature_changed.count(f)) continue;
    out.push_back({f, PointKind::kEnter});
    out.push_back({f, PointKind::kExit});
  }
  return out;
}

std::string FormatPointList(const std::vector<ProgramPoint>& points) {
  std::string out;
  for (const ProgramPoint& p : points) out += p.Name() + "\n";
  return out;
}

std::vector<ProgramPoint> ParsePointList(std::string_view text) {
  std::vector<ProgramPoint> out;
  std::vector<std::string> lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = Trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    auto p = ProgramPoint::FromName(line);
    if (!p) throw ParseError("not a program point: " + std::string(line), i + 1);
    out.push_back(*p);
  }
  return out;
}

}  // namespace bdci
