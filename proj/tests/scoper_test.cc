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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bdci/error.h"
#include "bdci/text.h"

namespace bdci {
namespace {

const std::filesystem::path kCorpus =
    std::filesystem::path(BDCI_SOURCE_DIR) / "corpus" / "running_example";

// The shared files plus one version overlay, as the test harness assembles
// them on disk.
SourceTree CorpusTree(const std::string& version) {
  SourceTree tree = SourceTree::Load(kCorpus / "common", {"src"});
  for (auto& [path, text] : SourceTree::Load(kCorpus / version, {"src"}).files) {
    tree.files[path] = text;
  }
  return tree;
}

std::vector<std::string> Names(const std::vector<FunctionSpan>& spans) {
  std::vector<std::string> out;
  for (const auto& span : spans) out.push_back(span.name);
  return out;
}

std::set<std::string> PointNames(const std::vector<ProgramPoint>& points) {
  std::set<std::string> out;
  for (const auto& p : points) out.insert(p.Name());
  return out;
}

TEST(ExtractFunctions, RunningExampleBase) {
  SourceTree tree = CorpusTree("base");
  ExtractResult result =
      ExtractFunctions(tree.files.at("src/pricing.c"), "src/pricing.c");
  EXPECT_TRUE(result.warnings.empty());
  EXPECT_EQ(Names(result.functions),
            (std::vector<std::string>{"getTotalPrice", "getDiscountedPrice",
                                      "getSaving"}));
  for (const auto& span : result.functions) {
    EXPECT_LE(span.start_line, span.end_line);
  }
  EXPECT_EQ(result.functions[0].signature, "int(int,int)");
  EXPECT_EQ(result.functions[2].signature, "int(int,int,int)");
  for (std::size_t i = 1; i < result.functions.size(); ++i) {
    EXPECT_LT(result.functions[i - 1].end_line, result.functions[i].start_line);
  }
}

TEST(ExtractFunctions, EmptyFile) {
  EXPECT_TRUE(ExtractFunctions("", "empty.c").functions.empty());
}

TEST(ExtractFunctions, BraceInsideStringLiteral) {
  const std::string source =
      "#include <stdio.h>\n"          // 1
      "static const char* close_brace(void)\n"  // 2
      "{\n"                           // 3
      "  /* } in a comment */\n"      // 4
      "  return \"}\";\n"             // 5
      "}\n"                           // 6
      "\n"                            // 7
      "int after(int x) { return x + '}'; }\n";  // 8
  ExtractResult result = ExtractFunctions(source, "s.c");
  ASSERT_EQ(result.functions.size(), 2u);
  EXPECT_EQ(result.functions[0].name, "close_brace");
  EXPECT_EQ(result.functions[0].start_line, 2);
  EXPECT_EQ(result.functions[0].end_line, 6);
  EXPECT_EQ(result.functions[0].signature, "const char*(void)");
  EXPECT_EQ(result.functions[1].name, "after");
  EXPECT_EQ(result.functions[1].start_line, 8);
  EXPECT_EQ(result.functions[1].end_line, 8);
}

TEST(ExtractFunctions, SkipsDeclarationsAndInitializers) {
  const std::string source =
      "int proto(int a);\n"
      "struct point { int x; int y; };\n"
      "int table[] = { 1, 2, 3 };\n"
      "extern \"C\" {\n"
      "int inner(void) { return 0; }\n"
      "}\n"
      "#define BODY(x) { x; }\n";
  ExtractResult result = ExtractFunctions(source, "d.c");
  EXPECT_EQ(Names(result.functions), (std::vector<std::string>{"inner"}));
}

TEST(ExtractFunctions, UnbalancedBracesWarnAndStop) {
  const std::string source =
      "int ok(void) { return 1; }\n"
      "int broken(void) {\n"
      "  if (1) {\n"
      "    return 2;\n"
      "}\n";
  ExtractResult result = ExtractFunctions(source, "u.c");
  EXPECT_EQ(Names(result.functions), (std::vector<std::string>{"ok"}));
  ASSERT_EQ(result.warnings.size(), 1u);
  EXPECT_NE(result.warnings[0].find("u.c"), std::string::npos);
}

TEST(ExtractFunctions, SignatureIgnoresParameterNames) {
  auto a = ExtractFunctions("static int f(int count, char *name) {}\n", "a.c");
  auto b = ExtractFunctions("int f(int n,char*s){}\n", "b.c");
  ASSERT_EQ(a.functions.size(), 1u);
  ASSERT_EQ(b.functions.size(), 1u);
  EXPECT_EQ(a.functions[0].signature, b.functions[0].signature);
  auto c = ExtractFunctions("int f(long n, char *s) {}\n", "c.c");
  EXPECT_NE(a.functions[0].signature, c.functions[0].signature);
}

TEST(DiffLines, Basics) {
  std::vector<std::string> a{"a", "b", "c", "d"};
  EXPECT_TRUE(DiffLines(a, a).empty());

  auto hunks = DiffLines(a, {"a", "x", "c", "d", "e"});
  ASSERT_EQ(hunks.size(), 2u);
  EXPECT_EQ(hunks[0].base_start, 2);
  EXPECT_EQ(hunks[0].base_count, 1);
  EXPECT_EQ(hunks[0].version_start, 2);
  EXPECT_EQ(hunks[0].version_count, 1);
  EXPECT_EQ(hunks[1].base_count, 0);
  EXPECT_EQ(hunks[1].base_start, 4);
  EXPECT_EQ(hunks[1].version_start, 5);
  EXPECT_EQ(hunks[1].version_count, 1);

  hunks = DiffLines({}, {"x", "y"});
  ASSERT_EQ(hunks.size(), 1u);
  EXPECT_EQ(hunks[0].base_start, 0);
  EXPECT_EQ(hunks[0].version_count, 2);
}

// Applying the hunks to the base must give the version back, and the number
// of edited lines must match the LCS distance computed by plain DP.
TEST(DiffLines, PropertyReconstructsAndIsMinimal) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 400; ++trial) {
    std::uniform_int_distribution<int> len(0, 12), sym(0, 3);
    std::vector<std::string> a(len(rng)), b(len(rng));
    for (auto& s : a) s = std::string(1, static_cast<char>('a' + sym(rng)));
    for (auto& s : b) s = std::string(1, static_cast<char>('a' + sym(rng)));
    auto hunks = DiffLines(a, b);

    std::vector<std::string> rebuilt;
    int next_base = 1;
    int edited = 0;
    for (const auto& h : hunks) {
      int copy_until = h.base_count == 0 ? h.base_start : h.base_start - 1;
      for (; next_base <= copy_until; ++next_base) {
        rebuilt.push_back(a[next_base - 1]);
      }
      next_base += h.base_count;
      int vstart = h.version_count == 0 ? h.version_start : h.version_start - 1;
      for (int k = 0; k < h.version_count; ++k) rebuilt.push_back(b[vstart + k]);
      edited += h.base_count + h.version_count;
    }
    for (; next_base <= static_cast<int>(a.size()); ++next_base) {
      rebuilt.push_back(a[next_base - 1]);
    }
    ASSERT_EQ(rebuilt, b) << "trial " << trial;

    std::vector<std::vector<int>> lcs(a.size() + 1,
                                      std::vector<int>(b.size() + 1, 0));
    for (std::size_t i = 1; i <= a.size(); ++i) {
      for (std::size_t j = 1; j <= b.size(); ++j) {
        lcs[i][j] = a[i - 1] == b[j - 1]
                        ? lcs[i - 1][j - 1] + 1
                        : std::max(lcs[i - 1][j], lcs[i][j - 1]);
      }
    }
    EXPECT_EQ(edited, static_cast<int>(a.size() + b.size()) -
                          2 * lcs[a.size()][b.size()]);
  }
}

TEST(ChangedFunctions, RunningExample) {
  SourceTree base = CorpusTree("base");
  EXPECT_EQ(ChangedFunctions(base, CorpusTree("version1")).changed,
            (std::set<std::string>{"getDiscountedPrice"}));
  EXPECT_EQ(ChangedFunctions(base, CorpusTree("version2")).changed,
            (std::set<std::string>{"getTotalPrice"}));
  EXPECT_EQ(ChangedFunctions(base, CorpusTree("guard")).changed,
            (std::set<std::string>{"getSaving"}));
  FunctionChanges same = ChangedFunctions(base, base);
  EXPECT_TRUE(same.changed.empty());
  EXPECT_TRUE(same.outside.empty());
}

TEST(ChangedFunctions, SignatureAndOutsideLines) {
  SourceTree base, version;
  base.files["m.c"] =
      "int g = 1;\n"
      "int f(int a) {\n"
      "  return a;\n"
      "}\n"
      "int h(void) { return f(2); }\n";
  version.files["m.c"] =
      "int g = 2;\n"
      "int f(long a) {\n"
      "  return a;\n"
      "}\n"
      "int h(void) { return f(2); }\n";
  FunctionChanges changes = ChangedFunctions(base, version);
  EXPECT_EQ(changes.changed, (std::set<std::string>{"f"}));
  EXPECT_EQ(changes.signature_changed, (std::set<std::string>{"f"}));
  ASSERT_EQ(changes.outside.size(), 2u);
  EXPECT_EQ(changes.outside[0].file, "m.c");
  EXPECT_EQ(changes.outside[0].line, 1);
}

TEST(ChangedFunctions, AddedAndRemovedFiles) {
  SourceTree base, version;
  base.files["old.c"] = "int gone(void) { return 0; }\n";
  version.files["new.c"] = "int fresh(void) { return 1; }\n";
  EXPECT_EQ(ChangedFunctions(base, version).changed,
            (std::set<std::string>{"fresh", "gone"}));
}

TEST(SourceTree, MissingFileIsIoError) {
  try {
    ReadFile("/nonexistent/bdci/file.c");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(std::string(e.what()).find("file.c"), std::string::npos);
  }
}

TEST(CallGraph, RunningExample) {
  CallGraph graph = BuildCallGraph(CorpusTree("base"));
  EXPECT_EQ(graph.nodes(),
            (std::set<std::string>{"getDiscountedPrice", "getSaving",
                                   "getTotalPrice"}));
  using Edge = std::pair<std::string, std::string>;
  EXPECT_EQ(graph.edges(),
            (std::set<Edge>{{"getSaving", "getDiscountedPrice"},
                            {"getSaving", "getTotalPrice"}}));
}

TEST(CallGraph, LeafAndSelfEdge) {
  SourceTree tree;
  tree.files["r.c"] =
      "int leaf(int x) { return x; }\n"
      "int fact(int n) { return n <= 1 ? 1 : n * fact(n - 1); }\n"
      "int caller(void) { printf(\"%d\", leaf(1)); return 0; }\n";
  CallGraph graph = BuildCallGraph(tree);
  EXPECT_TRUE(graph.Callees("leaf").empty());
  EXPECT_EQ(graph.Callees("fact"), (std::set<std::string>{"fact"}));
  // printf is not defined in the tree, so no edge and no node.
  EXPECT_EQ(graph.Callees("caller"), (std::set<std::string>{"leaf"}));
  EXPECT_EQ(graph.nodes().count("printf"), 0u);
}

TEST(MonitoredSet, Examples) {
  CallGraph graph = BuildCallGraph(CorpusTree("base"));
  auto points =
      MonitoredSet({"getDiscountedPrice", "getTotalPrice"}, graph);
  EXPECT_EQ(PointNames(points),
            (std::set<std::string>{
                "getDiscountedPrice_ENTER", "getDiscountedPrice_EXIT",
                "getSaving_ENTER", "getSaving_EXIT", "getTotalPrice_ENTER",
                "getTotalPrice_EXIT"}));
  EXPECT_TRUE(std::is_sorted(points.begin(), points.end()));
  EXPECT_TRUE(MonitoredSet({}, graph).empty());

  CallGraph g;
  g.AddEdge("g", "f");
  g.AddEdge("f", "h");
  g.AddNode("unrelated");
  EXPECT_EQ(PointNames(MonitoredSet({"f"}, g, {"f"})),
            (std::set<std::string>{"g_ENTER", "g_EXIT", "h_ENTER", "h_EXIT"}));
}

TEST(MonitoredSet, PointListRoundTrip) {
  CallGraph graph = BuildCallGraph(CorpusTree("base"));
  auto points = MonitoredSet({"getSaving"}, graph);
  EXPECT_EQ(ParsePointList(FormatPointList(points)), points);
  EXPECT_TRUE(ParsePointList("").empty());
  EXPECT_THROW(ParsePointList("not a point\n"), ParseError);
}

// Random graphs: adding functions to the changed set never removes points.
TEST(ScoperProperty, MonitoredSetMonotone) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    CallGraph graph;
    std::uniform_int_distribution<int> node(0, 7);
    for (int i = 0; i < 8; ++i) graph.AddNode("f" + std::to_string(i));
    for (int e = 0; e < 10; ++e) {
      graph.AddEdge("f" + std::to_string(node(rng)),
                    "f" + std::to_string(node(rng)));
    }
    std::set<std::string> small, sig;
    for (int i = 0; i < 8; ++i) {
      if (rng() % 3 == 0) small.insert("f" + std::to_string(i));
      if (rng() % 5 == 0) sig.insert("f" + std::to_string(i));
    }
    std::set<std::string> large = small;
    large.insert("f" + std::to_string(node(rng)));
    auto a = PointNames(MonitoredSet(small, graph, sig));
    auto b = PointNames(MonitoredSet(large, graph, sig));
    EXPECT_TRUE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
  }
}

// Random single-line edits to the corpus: every changed line is attributed
// to a function or reported as outside one.
TEST(ScoperProperty, EveryChangedLineIsCovered) {
  SourceTree base = CorpusTree("base");
  const std::string& text = base.files.at("src/pricing.c");
  std::vector<std::string> lines = SplitLines(text);
  ExtractResult spans = ExtractFunctions(text, "src/pricing.c");
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> edited = lines;
    std::size_t at = rng() % edited.size();
    edited[at] += " /* edit */";
    SourceTree version = base;
    version.files["src/pricing.c"] = Join(edited, "\n") + "\n";
    FunctionChanges changes = ChangedFunctions(base, version);
    int line = static_cast<int>(at) + 1;
    bool inside = false;
    for (const auto& span : spans.functions) {
      if (line >= span.start_line && line <= span.end_line) {
        inside = true;
        EXPECT_TRUE(changes.changed.count(span.name)) << "line " << line;
      }
    }
    if (!inside) {
      ASSERT_EQ(changes.outside.size(), 2u) << "line " << line;
      EXPECT_EQ(changes.outside[0].line, line);
      EXPECT_TRUE(changes.changed.empty());
    }
  }
}

// The same files handed over in a different insertion order give the same
// answers.
TEST(ScoperProperty, IndependentOfFileOrder) {
  std::vector<std::pair<std::string, std::string>> files{
      {"a.c", "int a(void) { return b(); }\n"},
      {"b.c", "int b(void) { return c(); }\n"},
      {"c.c", "int c(void) { return a(); }\n"},
  };
  std::vector<std::pair<std::string, std::string>> changed_files = files;
  changed_files[1].second = "int b(void) { return c() + 1; }\n";
  std::set<std::string> reference_changed;
  std::set<std::pair<std::string, std::string>> reference_edges;
  std::sort(files.begin(), files.end());
  int permutation = 0;
  do {
    SourceTree base, version;
    for (const auto& [path, text] : files) base.files.emplace(path, text);
    for (auto it = changed_files.rbegin(); it != changed_files.rend(); ++it) {
      version.files.emplace(it->first, it->second);
    }
    auto changed = ChangedFunctions(base, version).changed;
    auto edges = BuildCallGraph(base).edges();
    if (permutation++ == 0) {
      reference_changed = changed;
      reference_edges = edges;
    }
    EXPECT_EQ(changed, reference_changed);
    EXPECT_EQ(edges, reference_edges);
  } while (std::next_permutation(files.begin(), files.end()));
  EXPECT_EQ(reference_changed, (std::set<std::string>{"b"}));
}

}  // namespace
}  // namespace bdci
