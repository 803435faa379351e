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

#include "bdci/analyzer.h"

#include <algorithm>
#include <iterator>
#include <sstream>

#include "bdci/error.h"
#include "bdci/text.h"

namespace bdci {
namespace {

constexpr std::string_view kConflictHeader = "HIGHER-ORDER CONFLICT: function ";
constexpr std::string_view kNoConflicts = "NO HIGHER-ORDER CONFLICTS";

struct AtomOrder {
  bool operator()(const Atom& a, const Atom& b) const { return AtomLess(a, b); }
};

std::vector<Atom> Intersect(const std::vector<Atom>& a,
                            const std::vector<Atom>& b) {
  std::vector<Atom> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out), AtomOrder{});
  return out;
}

std::vector<Atom> Minus(const std::vector<Atom>& a, const std::vector<Atom>& b) {
  std::vector<Atom> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out), AtomOrder{});
  return out;
}

std::string PointSetName(const PropertyMap& map) {
  std::vector<std::string> names;
  for (const auto& [point, set] : map) names.push_back(point.Name());
  return names.empty() ? "(none)" : Join(names, ", ");
}

// Atoms that are not shared by all three conditions.
std::vector<Atom> DifferingAtoms(const std::array<Condition, 3>& c) {
  std::vector<Atom> all;
  for (const auto& cond : c) {
    all.insert(all.end(), cond.atoms().begin(), cond.atoms().end());
  }
  std::sort(all.begin(), all.end(), AtomLess);
  all.erase(std::unique(all.begin(), all.end()), all.end());
  std::vector<Atom> common = Intersect(c[0].atoms(), c[1].atoms());
  common = Intersect(common, c[2].atoms());
  return Minus(all, common);
}

}  // namespace

const char* ChangeStatusName(ChangeStatus status) {
  switch (status) {
    case ChangeStatus::kUnchanged: return "UNCHANGED";
    case ChangeStatus::kChanged: return "CHANGED";
    case ChangeStatus::kUncomparable: return "UNCOMPARABLE";
  }
  return "?";
}

ChangeSet BehavioralChanges(const PropertyMap& base, const PropertyMap& version,
                            const AnalyzerOptions& options) {
  bool same_points = base.size() == version.size() &&
                     std::equal(base.begin(), base.end(), version.begin(),
                                [](const auto& x, const auto& y) {
                                  return x.first == y.first;
                                });
  if (!same_points) {
    throw Error(ErrorCode::kInput,
                "property maps cover different program points: {" +
                    PointSetName(base) + "} vs {" + PointSetName(version) +
                    "}");
  }

  ChangeSet out;
  for (const auto& [point, before] : base) {
    const PropertySet& after = version.at(point);
    PointChange change;
    change.point = point;
    change.base = before.condition;
    change.version = after.condition;
    change.base_uncomparable = before.uncomparable;
    change.version_uncomparable = after.uncomparable;
    if (before.uncomparable || after.uncomparable) {
      change.status = ChangeStatus::kUncomparable;
    } else {
      change.same = Intersect(before.condition.atoms(), after.condition.atoms());
      change.dropped = Minus(before.condition.atoms(), after.condition.atoms());
      change.added = Minus(after.condition.atoms(), before.condition.atoms());
      change.verdict =
          Equivalent(before.condition, after.condition, options.decision);
      change.status = change.verdict.differs() ? ChangeStatus::kChanged
                                               : ChangeStatus::kUnchanged;
    }
    out.emplace(point, std::move(change));
  }
  return out;
}

InterferingRegion ComputeInterferingRegion(const ChangeSet& changes1,
                                           const ChangeSet& changes2) {
  InterferingRegion region;
  for (const auto& [point, c1] : changes1) {
    auto it = changes2.find(point);
    if (it == changes2.end()) continue;
    const PointChange& c2 = it->second;
    if (c1.status == ChangeStatus::kUncomparable ||
        c2.status == ChangeStatus::kUncomparable) {
      CoverageGap gap{point, {}};
      if (c1.base_uncomparable || c2.base_uncomparable) gap.versions.push_back(0);
      if (c1.version_uncomparable) gap.versions.push_back(1);
      if (c2.version_uncomparable) gap.versions.push_back(2);
      region.gaps.push_back(std::move(gap));
    } else if (c1.status == ChangeStatus::kChanged &&
               c2.status == ChangeStatus::kChanged) {
      region.points.push_back(point);
    }
  }
  return region;
}

std::size_t ConflictAnalysis::LiveCount() const {
  return static_cast<std::size_t>(
      std::count_if(reports.begin(), reports.end(),
                    [](const ConflictReport& r) { return r.live(); }));
}

ConflictAnalysis DetectConflicts(const PropertyMap& base,
                                 const PropertyMap& branch1,
                                 const PropertyMap& branch2,
                                 const AnalyzerOptions& options) {
  ConflictAnalysis analysis;
  analysis.changes1 = BehavioralChanges(base, branch1, options);
  analysis.changes2 = BehavioralChanges(base, branch2, options);
  analysis.region =
      ComputeInterferingRegion(analysis.changes1, analysis.changes2);

  for (const ProgramPoint& point : analysis.region.points) {
    const PointChange& c1 = analysis.changes1.at(point);
    const PointChange& c2 = analysis.changes2.at(point);
    ConflictReport report;
    report.point = point;
    report.conditions = {c1.base, c1.version, c2.version};
    report.v01 = c1.verdict;
    report.v02 = c2.verdict;
    report.v12 = Equivalent(c1.version, c2.version, options.decision);

    if (!report.v12.differs()) {
      report.suppression = Suppression::kEquivalent;
    } else if (!options.noise.empty()) {
      std::set<std::string> mentioned;
      bool all_noise = true;
      for (const Atom& atom : DifferingAtoms(report.conditions)) {
        for (const std::string& var : atom.Variables()) {
          if (options.noise.count(var) == 0) {
            all_noise = false;
          } else {
            mentioned.insert(var);
          }
        }
      }
      if (all_noise) {
        report.suppression = Suppression::kNoise;
        report.noise_variables.assign(mentioned.begin(), mentioned.end());
      }
    }
    analysis.reports.push_back(std::move(report));
  }
  return analysis;
}

std::string RenderReport(const ConflictAnalysis& analysis,
                         const std::array<std::string, 3>& labels) {
  std::ostringstream out;
  bool first = true;
  for (const ConflictReport& report : analysis.reports) {
    if (!report.live()) continue;
    if (!first) out << '\n';
    first = false;
    std::array<std::string, 3> text;
    for (int i = 0; i < 3; ++i) text[i] = Serialize(report.conditions[i]);
    out << kConflictHeader << report.point.Name() << '\n';
    out << "Model 0<->1: " << text[0] << "<->" << text[1] << ";\n";
    out << "Model 0<->2: " << text[0] << "<->" << text[2] << ";\n";
    out << "Model 1<->2: " << text[1] << "<->" << text[2] << ";\n";
  }
  if (first) out << kNoConflicts << '\n';

  std::vector<std::string> summary;
  for (const ConflictReport& report : analysis.reports) {
    switch (report.suppression) {
      case Suppression::kNone:
        break;
      case Suppression::kEquivalent:
        summary.push_back("SUPPRESSED: function " + report.point.Name() +
                          " (equivalent parallel changes)");
        break;
      case Suppression::kNoise:
        summary.push_back("SUPPRESSED: function " + report.point.Name() +
                          " (noise variables: " +
                          Join(report.noise_variables, ", ") + ")");
        break;
    }
  }
  for (const CoverageGap& gap : analysis.region.gaps) {
    std::vector<std::string> names;
    for (int v : gap.versions) names.push_back(labels[v]);
    summary.push_back("COVERAGE GAP: function " + gap.point.Name() +
                      " (not comparable in " + Join(names, ", ") + ")");
  }
  if (!summary.empty()) {
    out << '\n';
    for (const auto& line : summary) out << line << '\n';
  }
  return out.str();
}

std::vector<ParsedConflict> ParseReport(std::string_view text) {
  std::vector<ParsedConflict> out;
  std::vector<std::string> lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& header = lines[i];
    if (header.rfind(kConflictHeader, 0) != 0) continue;
    ParsedConflict block;
    block.point = header.substr(kConflictHeader.size());
    if (!ProgramPoint::FromName(block.point)) {
      throw ParseError("bad program point '" + block.point + "'", i + 1);
    }
    static const char* const kPrefixes[] = {"Model 0<->1: ", "Model 0<->2: ",
                                            "Model 1<->2: "};
    static const int kSides[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    std::array<std::optional<Condition>, 3> seen;
    for (int m = 0; m < 3; ++m) {
      std::size_t n = i + 1 + m;
      if (n >= lines.size()) throw ParseError("truncated conflict block", n + 1);
      std::string_view line = lines[n];
      std::string_view prefix = kPrefixes[m];
      if (line.substr(0, prefix.size()) != prefix || line.empty() ||
          line.back() != ';') {
        throw ParseError("expected '" + std::string(Trim(prefix)) + " ...;'",
                         n + 1);
      }
      std::string_view body =
          line.substr(prefix.size(), line.size() - prefix.size() - 1);
      std::size_t sep = body.find("<->");
      if (sep == std::string_view::npos) {
        throw ParseError("missing '<->' separator", n + 1);
      }
      std::array<std::string_view, 2> halves{body.substr(0, sep),
                                             body.substr(sep + 3)};
      for (int s = 0; s < 2; ++s) {
        Condition cond;
        try {
          cond = ParseCondition(halves[s]);
        } catch (const ParseError& e) {
          throw ParseError(e.detail(), n + 1);
        }
        auto& slot = seen[kSides[m][s]];
        if (slot && !(*slot == cond)) {
          throw ParseError("model " + std::to_string(kSides[m][s]) +
                               " differs between lines",
                           n + 1);
        }
        slot = cond;
      }
    }
    for (int v = 0; v < 3; ++v) block.conditions[v] = *seen[v];
    out.push_back(std::move(block));
    i += 3;
  }
  return out;
}

}  // namespace bdci
