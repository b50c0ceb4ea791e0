// Copyright 2026 The sampled-hr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Cross-algorithm reports: curve dominance, the expectation-order check for
// dominated profiles, mapping error summaries and winner tables.

#ifndef SAMPLED_HR_ANALYSIS_HPP_
#define SAMPLED_HR_ANALYSIS_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sampled_hr/core.hpp"
#include "sampled_hr/errors.hpp"
#include "sampled_hr/mapping.hpp"
#include "sampled_hr/metrics.hpp"

namespace sampled_hr {

enum class Dominance { ADominates, BDominates, Tie, Incomparable };

inline const char* to_string(Dominance d) {
  switch (d) {
    case Dominance::ADominates: return "A-dominates";
    case Dominance::BDominates: return "B-dominates";
    case Dominance::Tie: return "tie";
    case Dominance::Incomparable: return "incomparable";
  }
  return "?";
}

// Tie means each curve dominates the other (identical curves).
inline Dominance dominance(const HitRatioCurve& a, const HitRatioCurve& b) {
  if (a.max_cutoff() != b.max_cutoff()) {
    throw ConfigError("dominance needs curves of equal length");
  }
  bool a_ge = true;
  bool b_ge = true;
  for (Count k = 1; k <= a.max_cutoff(); ++k) {
    a_ge = a_ge && a.at(k) >= b.at(k);
    b_ge = b_ge && b.at(k) >= a.at(k);
  }
  if (a_ge && b_ge) return Dominance::Tie;
  if (a_ge) return Dominance::ADominates;
  if (b_ge) return Dominance::BDominates;
  return Dominance::Incomparable;
}

struct TheoremViolation {
  Count k;
  double expected_a;
  double expected_b;
};

struct TheoremReport {
  bool hypothesis_met = false;
  std::vector<TheoremViolation> violations;
  HitRatioCurve expected_a;
  HitRatioCurve expected_b;
};

// If HR_a dominates HR_b, checks E[SHR_a@k] >= E[SHR_b@k] - 1e-12 for every
// k. When the hypothesis fails nothing is asserted and the report says so.
inline TheoremReport sampling_theorem_check(const RankProfile& a,
                                            const RankProfile& b,
                                            const SamplingScheme& scheme,
                                            const CatalogSpec& catalog) {
  constexpr double kSlack = 1e-12;
  TheoremReport report;
  const auto d = dominance(hr_curve(a), hr_curve(b));
  report.hypothesis_met = d == Dominance::ADominates || d == Dominance::Tie;
  if (!report.hypothesis_met) return report;
  report.expected_a = expected_shr_curve(histogram(a), scheme, catalog);
  report.expected_b = expected_shr_curve(histogram(b), scheme, catalog);
  for (Count k = 1; k <= catalog.sample_size(); ++k) {
    const double ea = report.expected_a.at(k);
    const double eb = report.expected_b.at(k);
    if (ea < eb - kSlack) report.violations.push_back({k, ea, eb});
  }
  return report;
}

// Mean absolute / relative errors |HR@f(k) - SHR@k| over all k, at k = 1 and
// over k = 2..10. A relative field is empty when SHR@k = 0 at any k it
// covers; those k are listed in skipped_k.
struct ErrorReport {
  double abs = 0.0;
  std::optional<double> rel;
  double abs_at_1 = 0.0;
  std::optional<double> rel_at_1;
  double abs_2_10 = 0.0;
  std::optional<double> rel_2_10;
  std::vector<Count> skipped_k;
};

inline ErrorReport error_report(const HitRatioCurve& global,
                                const HitRatioCurve& sampled,
                                const MappingTable& table) {
  const Count n = table.catalog().sample_size();
  if (sampled.max_cutoff() != n) {
    throw ConfigError("sampled curve has " + std::to_string(sampled.max_cutoff()) +
                      " cutoffs, mapping table has n=" + std::to_string(n));
  }
  const auto mapped = mapped_hr_curve(global, table);

  struct Range {
    CompensatedSum abs, rel;
    Count count = 0;
    bool rel_defined = true;
  };
  auto accumulate = [&](Range& range, Count k) {
    const double shr = sampled.at(k);
    const double err = std::abs(mapped.at(k) - shr);
    range.abs.add(err);
    ++range.count;
    if (shr > 0.0) {
      range.rel.add(err / shr);
    } else {
      range.rel_defined = false;
    }
  };

  Range all, first, head;
  ErrorReport report;
  for (Count k = 1; k <= n; ++k) {
    accumulate(all, k);
    if (k == 1) accumulate(first, k);
    if (k >= 2 && k <= 10) accumulate(head, k);
    if (sampled.at(k) == 0.0) report.skipped_k.push_back(k);
  }
  auto mean = [](const CompensatedSum& s, Count c) {
    return c == 0 ? 0.0 : s.value() / static_cast<double>(c);
  };
  auto rel_mean = [&](const Range& r) -> std::optional<double> {
    if (!r.rel_defined) return std::nullopt;
    return mean(r.rel, r.count);
  };
  report.abs = mean(all.abs, all.count);
  report.rel = rel_mean(all);
  report.abs_at_1 = mean(first.abs, first.count);
  report.rel_at_1 = rel_mean(first);
  report.abs_2_10 = mean(head.abs, head.count);
  report.rel_2_10 = rel_mean(head);
  return report;
}

struct AlgorithmCurves {
  std::string label;
  HitRatioCurve global;   // HR@K, K = 1..N
  HitRatioCurve sampled;  // SHR@k, k = 1..n
};

struct LabeledTable {
  std::string label;
  MappingTable table;
};

struct WinnerRow {
  Count k = 0;
  std::vector<double> shr;     // per algorithm, in label order
  std::vector<double> mapped;  // HR@f(k) per algorithm
  std::vector<std::string> shr_winners;
  std::vector<std::string> mapped_winners;
  bool shr_tie = false;
  bool mapped_tie = false;
};

struct WinnerTable {
  std::vector<std::string> labels;
  std::vector<WinnerRow> rows;
};

namespace detail {

// Labels whose value is within 1e-12 of the maximum.
inline std::vector<std::string> argmax_labels(const std::vector<double>& values,
                                              const std::vector<std::string>& labels) {
  constexpr double kTie = 1e-12;
  const double best = *std::max_element(values.begin(), values.end());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > best - kTie) out.push_back(labels[i]);
  }
  return out;
}

}  // namespace detail

// One table per algorithm (matched by label) so fitted beta@P maps can
// differ between algorithms; dataset-wide maps simply repeat.
inline WinnerTable winner_table(const std::vector<AlgorithmCurves>& curves,
                                const std::vector<LabeledTable>& tables,
                                const std::vector<Count>& ks) {
  if (curves.empty()) throw ConfigError("winner table needs at least one algorithm");
  if (tables.size() != curves.size()) {
    throw ConfigError("one mapping table per algorithm is required");
  }
  std::set<std::string> seen;
  for (const auto& c : curves) {
    if (!seen.insert(c.label).second) {
      throw ConfigError("duplicate algorithm label '" + c.label + "'");
    }
  }
  std::vector<const MappingTable*> matched;
  for (const auto& c : curves) {
    const auto it = std::find_if(tables.begin(), tables.end(),
                                 [&](const LabeledTable& t) { return t.label == c.label; });
    if (it == tables.end()) {
      throw ConfigError("no mapping table for algorithm '" + c.label + "'");
    }
    matched.push_back(&it->table);
  }
  const CatalogSpec catalog = matched.front()->catalog();
  for (const auto* t : matched) {
    if (!(t->catalog() == catalog)) {
      throw ConfigError("algorithms do not share one catalog");
    }
  }

  WinnerTable table;
  for (const auto& c : curves) table.labels.push_back(c.label);
  for (Count k : ks) {
    if (k < 1 || k > catalog.sample_size()) {
      throw DomainError("cutoff " + std::to_string(k) + " outside [1, " +
                        std::to_string(catalog.sample_size()) + "]");
    }
    WinnerRow row;
    row.k = k;
    for (std::size_t i = 0; i < curves.size(); ++i) {
      row.shr.push_back(curves[i].sampled.at(k));
      row.mapped.push_back(evaluate_mapped_hr(curves[i].global, *matched[i], k));
    }
    row.shr_winners = detail::argmax_labels(row.shr, table.labels);
    row.mapped_winners = detail::argmax_labels(row.mapped, table.labels);
    row.shr_tie = row.shr_winners.size() > 1;
    row.mapped_tie = row.mapped_winners.size() > 1;
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace sampled_hr

#endif  // SAMPLED_HR_ANALYSIS_HPP_
