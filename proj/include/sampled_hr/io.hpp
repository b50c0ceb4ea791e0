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

// CSV and JSON serialization of curves, mapping tables and reports.
// Floating values are written with 17 significant digits.

#ifndef SAMPLED_HR_IO_HPP_
#define SAMPLED_HR_IO_HPP_

#include <cstdio>
#include <fstream>
#include <ostream>
#include <span>
#include <string>

#include "json.hpp"
#include "sampled_hr/analysis.hpp"
#include "sampled_hr/core.hpp"
#include "sampled_hr/errors.hpp"
#include "sampled_hr/mapping.hpp"

namespace sampled_hr {

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// `k,value` rows, plus a `stderr` column when `std_error` is non-empty.
inline void write_curve_csv(std::ostream& out, const HitRatioCurve& curve,
                            std::span<const double> std_error = {}) {
  if (!std_error.empty() && std_error.size() != curve.max_cutoff()) {
    throw ConfigError("stderr column length does not match curve");
  }
  out << (std_error.empty() ? "k,value\n" : "k,value,stderr\n");
  for (Count k = 1; k <= curve.max_cutoff(); ++k) {
    out << k << ',' << format_double(curve.at(k));
    if (!std_error.empty()) out << ',' << format_double(std_error[k - 1]);
    out << '\n';
  }
}

inline void write_mapping_csv(std::ostream& out, const MappingTable& table) {
  out << "k,f_k\n";
  for (Count k = 1; k <= table.catalog().sample_size(); ++k) {
    out << k << ',' << format_double(table.at(k)) << '\n';
  }
}

// Catalog sidecar: {"N": <int>}.
inline Count read_catalog_sidecar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open catalog sidecar '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("catalog sidecar '" + path + "': " + e.what(), 0);
  }
  if (!doc.is_object() || !doc.contains("N") || !doc["N"].is_number_integer()) {
    throw ParseError("catalog sidecar '" + path + "' needs an integer \"N\"", 0);
  }
  const auto N = doc["N"].get<long long>();
  if (N < 2) throw DomainError("catalog size N must be >= 2");
  return static_cast<Count>(N);
}

namespace detail {

inline nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const ErrorReport& r) {
  nlohmann::ordered_json j;
  j["abs"] = r.abs;
  j["rel"] = detail::optional_number(r.rel);
  j["abs_at_1"] = r.abs_at_1;
  j["rel_at_1"] = detail::optional_number(r.rel_at_1);
  j["abs_2_10"] = r.abs_2_10;
  j["rel_2_10"] = detail::optional_number(r.rel_2_10);
  j["skipped_k"] = r.skipped_k;
  return j;
}

inline nlohmann::ordered_json to_json(const WinnerTable& t) {
  nlohmann::ordered_json j;
  j["labels"] = t.labels;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r;
    r["k"] = row.k;
    r["shr"] = row.shr;
    r["mapped_hr"] = row.mapped;
    r["shr_winners"] = row.shr_winners;
    r["mapped_winners"] = row.mapped_winners;
    r["shr_tie"] = row.shr_tie;
    r["mapped_tie"] = row.mapped_tie;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

inline nlohmann::ordered_json to_json(const FitTrace& t) {
  nlohmann::ordered_json j;
  j["iterates"] = t.iterates;
  j["converged"] = t.converged;
  j["final_a"] = t.final_a;
  return j;
}

}  // namespace sampled_hr

#endif  // SAMPLED_HR_IO_HPP_
