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

#include "bdci/benchkit.h"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "bdci/clex.h"
#include "bdci/error.h"
#include "bdci/scoper.h"
#include "bdci/text.h"

namespace fs = std::filesystem;

namespace bdci {
namespace {

// One candidate rewrite: replace source[begin, end) by `text`.
struct Rewrite {
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 0;
  std::string text;
};

bool InRange(int line, const MutationSpec& spec) {
  return line >= spec.first_line && line <= spec.last_line;
}

bool IsDecimalLiteral(std::string_view text) {
  return !text.empty() && std::all_of(text.begin(), text.end(), [](char c) {
    return c >= '0' && c <= '9';
  });
}

std::string RenderLiteral(long long value) {
  return value < 0 ? "(" + std::to_string(value) + ")" : std::to_string(value);
}

void CollectCrcr(const std::vector<CToken>& tokens,
                 const MutationSpec& spec, std::vector<Rewrite>& out) {
  for (const CToken& t : tokens) {
    if (t.kind != CToken::Kind::kNumber || !InRange(t.line, spec) ||
        !IsDecimalLiteral(t.text)) {
      continue;
    }
    long long literal = 0;
    auto [ptr, ec] =
        std::from_chars(t.text.data(), t.text.data() + t.text.size(), literal);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) continue;
    std::vector<long long> seen;
    for (long long v : {0LL, 1LL, -1LL, literal + 1, literal - 1}) {
      if (v == literal || std::find(seen.begin(), seen.end(), v) != seen.end()) {
        continue;
      }
      seen.push_back(v);
      out.push_back({t.offset, t.offset + t.text.size(), t.line,
                     RenderLiteral(v)});
    }
  }
}

void CollectOcng(std::string_view source, const std::vector<CToken>& tokens,
                 const MutationSpec& spec, std::vector<Rewrite>& out) {
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    const CToken& t = tokens[i];
    if (t.kind != CToken::Kind::kIdentifier ||
        (t.text != "if" && t.text != "while") || !InRange(t.line, spec) ||
        !tokens[i + 1].Is("(")) {
      continue;
    }
    std::size_t close = MatchingClose(tokens, i + 1);
    if (close >= tokens.size() || close == i + 2) continue;
    std::size_t begin = tokens[i + 2].offset;
    std::size_t end = tokens[close].offset;
    std::string cond(Trim(source.substr(begin, end - begin)));
    out.push_back({begin, end, t.line, "!(" + cond + ")"});
  }
}

bool IsControlKeyword(std::string_view word) {
  return word == "if" || word == "while" || word == "for" || word == "switch";
}

// Simple statements: at brace depth >= 1, starting right after `{`, `}`,
// `;`, `else`, `do` or a control header, and running to the next `;`
// without any brace in between. Keyword-led statements (declarations,
// return, jumps) and `T name ...` declarations are not candidates.
void CollectSsdl(const std::vector<CToken>& tokens,
                 const MutationSpec& spec, std::vector<Rewrite>& out) {
  int depth = 0;
  bool at_start = false;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const CToken& t = tokens[i];
    if (t.Is("{")) {
      ++depth;
      at_start = true;
      continue;
    }
    if (t.Is("}")) {
      --depth;
      at_start = true;
      continue;
    }
    if (t.kind == CToken::Kind::kIdentifier && IsControlKeyword(t.text) &&
        i + 1 < tokens.size() && tokens[i + 1].Is("(")) {
      std::size_t close = MatchingClose(tokens, i + 1);
      if (close >= tokens.size()) return;
      i = close;
      at_start = true;
      continue;
    }
    if (t.kind == CToken::Kind::kIdentifier &&
        (t.text == "else" || t.text == "do")) {
      at_start = true;
      continue;
    }
    bool start = at_start;
    at_start = false;
    if (!start || depth < 1 || t.Is(";")) {
      if (t.Is(";")) at_start = true;
      continue;
    }
    // Find the end of the statement.
    std::size_t j = i;
    int parens = 0;
    bool simple = true;
    for (; j < tokens.size(); ++j) {
      const CToken& u = tokens[j];
      if (u.Is("(") || u.Is("[")) ++parens;
      if (u.Is(")") || u.Is("]")) --parens;
      if (u.Is("{") || u.Is("}")) {
        simple = false;
        break;
      }
      if (parens == 0 && u.Is(";")) break;
    }
    if (j >= tokens.size() || !simple) continue;
    bool keyword_led = t.kind == CToken::Kind::kIdentifier && IsCKeyword(t.text);
    bool typedef_decl = t.kind == CToken::Kind::kIdentifier && i + 1 < j &&
                        tokens[i + 1].kind == CToken::Kind::kIdentifier;
    bool label = i + 1 < j && tokens[i + 1].Is(":");
    if (t.kind == CToken::Kind::kIdentifier && !keyword_led && !typedef_decl &&
        !label && InRange(t.line, spec)) {
      out.push_back({t.offset, tokens[j].offset + 1, t.line, ";"});
    }
    i = j;
    at_start = true;
  }
}

std::vector<Rewrite> Rewrites(std::string_view source,
                              const MutationSpec& spec) {
  if (spec.first_line < 1 || spec.last_line < spec.first_line) {
    throw Error(ErrorCode::kInapplicable,
                "bad line range " + std::to_string(spec.first_line) + "-" +
                    std::to_string(spec.last_line));
  }
  ExtractResult functions = ExtractFunctions(source, spec.file);
  bool inside = std::any_of(
      functions.functions.begin(), functions.functions.end(),
      [&](const FunctionSpan& f) {
        return f.start_line <= spec.first_line && spec.last_line <= f.end_line;
      });
  if (!inside) {
    throw Error(ErrorCode::kInapplicable,
                spec.file + ":" + std::to_string(spec.first_line) + "-" +
                    std::to_string(spec.last_line) +
                    " is not inside a single function");
  }
  std::vector<CToken> tokens = LexC(source);
  std::vector<Rewrite> out;
  switch (spec.op) {
    case MutationOperator::kSsdl: CollectSsdl(tokens, spec, out); break;
    case MutationOperator::kOcng: CollectOcng(source, tokens, spec, out); break;
    case MutationOperator::kCrcr: CollectCrcr(tokens, spec, out); break;
  }
  return out;
}

std::size_t AtomCount(const PropertyMap& map) {
  std::size_t n = 0;
  for (const auto& [point, set] : map) {
    if (!set.uncomparable) n += set.condition.size();
  }
  return n;
}

void CountChanges(const ChangeSet& changes, DeltaCounts& delta,
                  std::size_t& changed) {
  for (const auto& [point, c] : changes) {
    delta.same += c.same.size();
    delta.dropped += c.dropped.size();
    delta.added += c.added.size();
    if (c.status == ChangeStatus::kChanged) ++changed;
  }
}

// Sorted serialized bindings per point.
std::map<ProgramPoint, std::vector<std::string>> ObservedValues(
    const TraceLog& trace) {
  std::map<ProgramPoint, std::vector<std::string>> out;
  for (const Sample& s : trace.samples) {
    std::string row;
    for (const auto& [name, value] : s.bindings) {
      row += name + '=' + ValueKindName(value.kind()) + ':' + value.ToString() +
             ' ';
    }
    out[s.point].push_back(std::move(row));
  }
  for (auto& [point, rows] : out) std::sort(rows.begin(), rows.end());
  return out;
}

std::string Cell(std::string text) {
  std::replace_if(text.begin(), text.end(),
                  [](char c) { return c == '\t' || c == '\n' || c == '\r'; },
                  ' ');
  return text.empty() ? "-" : text;
}

std::string ExpectText(const std::optional<bool>& expect) {
  if (!expect) return "-";
  return *expect ? "conflict" : "none";
}

}  // namespace

const char* OperatorName(MutationOperator op) {
  switch (op) {
    case MutationOperator::kSsdl: return "SSDL";
    case MutationOperator::kOcng: return "OCNG";
    case MutationOperator::kCrcr: return "CRCR";
  }
  return "?";
}

std::optional<MutationOperator> ParseOperator(std::string_view text) {
  if (text == "SSDL") return MutationOperator::kSsdl;
  if (text == "OCNG") return MutationOperator::kOcng;
  if (text == "CRCR") return MutationOperator::kCrcr;
  return std::nullopt;
}

std::size_t CountMutations(std::string_view source, const MutationSpec& spec) {
  return Rewrites(source, spec).size();
}

Mutation Mutate(std::string_view source, const MutationSpec& spec) {
  std::vector<Rewrite> rewrites = Rewrites(source, spec);
  if (rewrites.empty()) {
    throw Error(ErrorCode::kInapplicable,
                std::string("no ") + OperatorName(spec.op) + " site in " +
                    spec.file + ":" + std::to_string(spec.first_line) + "-" +
                    std::to_string(spec.last_line));
  }
  const Rewrite& r = rewrites[spec.seed % rewrites.size()];
  Mutation m;
  m.line = r.line;
  m.original = std::string(source.substr(r.begin, r.end - r.begin));
  m.replacement = r.text;
  m.source = std::string(source.substr(0, r.begin)) + r.text +
             std::string(source.substr(r.end));
  return m;
}

CampaignSpec ParseCampaignSpec(std::string_view text, const fs::path& root) {
  CampaignSpec spec;
  spec.root = root;
  std::vector<std::string> lines = SplitLines(text);
  bool header = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = Trim(lines[i]);
    std::size_t n = i + 1;
    if (!header) {
      if (line != "# bdci campaign v1") {
        throw ParseError("expected '# bdci campaign v1' header", n);
      }
      header = true;
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    std::size_t space = line.find_first_of(" \t");
    std::string key(line.substr(0, space));
    std::string rest(space == std::string_view::npos
                         ? std::string_view()
                         : Trim(line.substr(space)));
    if (key == "shared") {
      spec.shared = rest;
    } else if (key == "base") {
      spec.base = rest;
    } else if (key == "branch1") {
      spec.branch1 = rest;
    } else if (key == "branch2") {
      spec.branch2 = rest;
    } else if (key == "sources") {
      spec.sources = SplitList(rest, ',');
    } else if (key == "tests") {
      spec.test_command = rest;
    } else if (key == "case") {
      auto fields = SplitWhitespace(rest);
      if (fields.size() < 2) throw ParseError("case needs an id", n);
      CampaignCase c;
      c.id = std::string(fields[0]);
      for (const auto& existing : spec.cases) {
        if (existing.id == c.id) {
          throw ParseError("duplicate case id '" + c.id + "'", n);
        }
      }
      std::size_t next = 2;
      if (fields[1] != "-") {
        auto op = ParseOperator(fields[1]);
        if (!op) {
          throw ParseError("unknown operator '" + std::string(fields[1]) + "'",
                           n);
        }
        if (fields.size() < 5) {
          throw ParseError("expected: case <id> <op> <file> <a>-<b> <seed>", n);
        }
        MutationSpec m;
        m.op = *op;
        m.file = std::string(fields[2]);
        std::string_view range = fields[3];
        std::size_t dash = range.find('-');
        auto number = [&](std::string_view s, auto& out) {
          auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
          if (ec != std::errc() || ptr != s.data() + s.size()) {
            throw ParseError("bad number '" + std::string(s) + "'", n);
          }
        };
        if (dash == std::string_view::npos) {
          number(range, m.first_line);
          m.last_line = m.first_line;
        } else {
          number(range.substr(0, dash), m.first_line);
          number(range.substr(dash + 1), m.last_line);
        }
        number(fields[4], m.seed);
        c.mutation = m;
        next = 5;
      }
      for (; next < fields.size(); ++next) {
        if (fields[next] == "expect=conflict") {
          c.expect_conflict = true;
        } else if (fields[next] == "expect=none") {
          c.expect_conflict = false;
        } else {
          throw ParseError("unexpected '" + std::string(fields[next]) + "'", n);
        }
      }
      spec.cases.push_back(std::move(c));
    } else {
      throw ParseError("unknown directive '" + key + "'", n);
    }
  }
  if (!header) throw ParseError("empty campaign spec", 1);
  for (const auto& [name, value] :
       {std::pair{"base", &spec.base}, std::pair{"branch1", &spec.branch1},
        std::pair{"branch2", &spec.branch2}}) {
    if (value->empty()) {
      throw ParseError(std::string("missing '") + name + "' directive",
                       lines.size());
    }
  }
  return spec;
}

CampaignSpec LoadCampaignSpec(const fs::path& file) {
  return ParseCampaignSpec(ReadFile(file), file.parent_path());
}

CampaignResult RunCampaign(const CampaignSpec& spec, const Config& config) {
  CampaignResult result;
  if (spec.cases.empty()) return result;

  Config run_config = config;
  if (!spec.test_command.empty()) run_config.test_command = spec.test_command;
  if (!spec.sources.empty()) run_config.sources = spec.sources;
  ValidateConfig(run_config);

  const fs::path work = run_config.work_dir / "campaign";
  auto assemble = [&](const std::string& overlay, const fs::path& dest) {
    fs::remove_all(dest);
    fs::create_directories(dest);
    if (!spec.shared.empty()) OverlayTree(spec.root / spec.shared, dest);
    OverlayTree(spec.root / overlay, dest);
    return VersionInput{overlay, dest, TreeHash(dest)};
  };
  VersionInput base = assemble(spec.base, work / "base");
  VersionInput branch1 = assemble(spec.branch1, work / "branch1");
  VersionInput branch2 = assemble(spec.branch2, work / "branch2");

  for (const CampaignCase& c : spec.cases) {
    CaseResult row;
    row.id = c.id;
    row.expect_conflict = c.expect_conflict;
    try {
      VersionInput mutant = branch2;
      if (c.mutation) {
        const MutationSpec& m = *c.mutation;
        row.op = OperatorName(m.op);
        fs::path dest = work / "cases" / c.id;
        fs::remove_all(dest);
        OverlayTree(branch2.tree, dest);
        std::string original = ReadFile(dest / m.file);

        // The target must touch what the branch itself changed.
        std::string before = fs::exists(base.tree / m.file)
                                 ? ReadFile(base.tree / m.file)
                                 : std::string();
        bool overlaps = false;
        for (const DiffHunk& h :
             DiffLines(SplitLines(before), SplitLines(original))) {
          // A pure deletion touches the lines on both sides of the gap.
          int lo = h.version_start;
          int hi = h.version_count == 0 ? h.version_start + 1
                                        : h.version_start + h.version_count - 1;
          if (m.first_line <= hi && lo <= m.last_line) overlaps = true;
        }
        if (!overlaps) {
          throw Error(ErrorCode::kInapplicable,
                      m.file + ":" + std::to_string(m.first_line) + "-" +
                          std::to_string(m.last_line) +
                          " does not overlap the branch change");
        }
        Mutation applied = Mutate(original, m);
        WriteFile(dest / m.file, applied.source);
        row.note = "line " + std::to_string(applied.line) + ": '" +
                   applied.original + "' -> '" + applied.replacement + "'";
        mutant = VersionInput{spec.branch2 + "+" + c.id, dest, TreeHash(dest)};
      }

      TripleResult triple = AnalyzeTriple({base, branch1, mutant}, run_config);
      for (int v = 0; v < 3; ++v) {
        row.properties[v] = AtomCount(triple.properties[v]);
      }
      CountChanges(triple.analysis.changes1, row.delta1, row.changed1);
      CountChanges(triple.analysis.changes2, row.delta2, row.changed2);
      row.conflicts = triple.analysis.LiveCount();
      row.gaps = triple.analysis.region.gaps.size();
      row.report = triple.report;

      if (c.mutation && !triple.monitored.empty()) {
        TraceRun reference =
            CollectTraces(branch2, triple.monitored, run_config);
        auto before = ObservedValues(LoadTraceDirectory(reference.dir));
        auto after = ObservedValues(LoadTraceDirectory(triple.traces[2].dir));
        for (const ProgramPoint& p : triple.monitored) {
          auto b = before.find(p);
          auto a = after.find(p);
          if (b != before.end() && a == after.end()) {
            row.lost_points.push_back(p.Name());
          } else if (b != before.end() && a != after.end() &&
                     b->second != a->second) {
            row.values_altered = true;
          }
        }
      }
      row.ok = true;
    } catch (const Error& e) {
      row.ok = false;
      row.note = e.what();
    }
    result.cases.push_back(std::move(row));
  }
  return result;
}

std::string CampaignResult::Table() const {
  std::ostringstream out;
  out << "case\toperator\tstatus\tbase_props\tb1_props\tb1_same\tb1_del\t"
         "b1_new\tb2_props\tb2_same\tb2_del\tb2_new\tb1_changed\tb2_changed\t"
         "conflicts\texpected\tdetected\tgaps\tvalues_altered\tlost_points\t"
         "note\n";
  for (const CaseResult& r : cases) {
    out << Cell(r.id) << '\t' << r.op << '\t' << (r.ok ? "OK" : "ERROR");
    if (r.ok) {
      out << '\t' << r.properties[0] << '\t' << r.properties[1] << '\t'
          << r.delta1.same << '\t' << r.delta1.dropped << '\t'
          << r.delta1.added << '\t' << r.properties[2] << '\t'
          << r.delta2.same << '\t' << r.delta2.dropped << '\t'
          << r.delta2.added << '\t' << r.changed1 << '\t' << r.changed2
          << '\t' << r.conflicts << '\t' << ExpectText(r.expect_conflict)
          << '\t' << (r.detected() ? "yes" : "no") << '\t' << r.gaps << '\t'
          << (r.values_altered ? "yes" : "no") << '\t'
          << Cell(Join(r.lost_points, ","));
    } else {
      for (int i = 0; i < 12; ++i) out << "\t-";
      out << '\t' << ExpectText(r.expect_conflict);
      for (int i = 0; i < 4; ++i) out << "\t-";
    }
    out << '\t' << Cell(r.note) << '\n';
  }
  return out.str();
}

std::string CampaignResult::Summary() const {
  std::size_t errors = 0, detected = 0;
  std::vector<std::string> mismatches, gaps, missed;
  for (const CaseResult& r : cases) {
    if (!r.ok) {
      ++errors;
      continue;
    }
    if (r.detected()) ++detected;
    if (r.expect_conflict && *r.expect_conflict != r.detected()) {
      mismatches.push_back(r.id);
    }
    if (r.gaps > 0) gaps.push_back(r.id);
    if (r.values_altered && !r.detected()) missed.push_back(r.id);
  }
  auto list = [](const std::vector<std::string>& ids) {
    return ids.empty() ? std::string("none") : Join(ids, ", ");
  };
  std::ostringstream out;
  out << "cases: " << cases.size() << " (" << errors << " errors)\n";
  out << "detected (>= 1 live conflict): " << detected << "\n";
  out << "expectation mismatches: " << list(mismatches) << "\n";
  out << "values altered but undetected: " << list(missed) << "\n";
  out << "coverage gaps: " << list(gaps) << "\n";
  return out.str();
}

}  // namespace bdci
