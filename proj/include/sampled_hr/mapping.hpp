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

// Mapping functions f with SHR@k ~ HR@f(k).
//
// Families:
//   linear   f(k) = (k - 1)(N - 1)/(n - 1) + 1
//   bound    f(k) = floor((k - 1/2)(N - 1)/(n - 1) + 1/2), clamped to [1, N]
//   uniform  f(k) = k (N - 1)/n + 1
//   beta@a   Beta(a, 1) rank-model recurrence
//     f(1)   = (N - 1) [a B(a, n)]^(1/a) + 1
//     f(k+1) = [a (N - 1)^a C(n - 1, k) B(a + k, n - k) + (f(k) - 1)^a]^(1/a) + 1
//   beta@P   beta@a with a fitted from sampled ranks.
//
// The Beta recurrence is accumulated as T_k = ((f(k) - 1)/(N - 1))^a, which
// stays in [0, 1] and telescopes to T_n = 1, so no (N - 1)^a power is ever
// formed.

#ifndef SAMPLED_HR_MAPPING_HPP_
#define SAMPLED_HR_MAPPING_HPP_

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sampled_hr/core.hpp"
#include "sampled_hr/dist.hpp"
#include "sampled_hr/errors.hpp"

namespace sampled_hr {

// f(k) for k = 1..n, stored at index k - 1.
class MappingTable {
 public:
  MappingTable(std::vector<double> f, CatalogSpec catalog)
      : f_(std::move(f)), catalog_(catalog) {
    if (f_.size() != catalog_.sample_size()) {
      throw ConfigError("mapping table needs exactly n entries");
    }
    for (std::size_t i = 0; i < f_.size(); ++i) {
      if (!std::isfinite(f_[i])) {
        throw ComputationError("mapping value f(" + std::to_string(i + 1) +
                               ") is not finite");
      }
      if (i > 0 && f_[i] < f_[i - 1]) {
        throw ComputationError("mapping decreases at k=" + std::to_string(i + 1));
      }
    }
  }

  double at(Count k) const {
    if (k < 1 || k > f_.size()) {
      throw DomainError("cutoff " + std::to_string(k) + " outside [1, " +
                        std::to_string(f_.size()) + "]");
    }
    return f_[k - 1];
  }
  std::span<const double> values() const noexcept { return f_; }
  const CatalogSpec& catalog() const noexcept { return catalog_; }

 private:
  std::vector<double> f_;
  CatalogSpec catalog_;
};

inline MappingTable linear_map(const CatalogSpec& catalog) {
  const double N = static_cast<double>(catalog.items());
  const double n = static_cast<double>(catalog.sample_size());
  std::vector<double> f(catalog.sample_size());
  for (Count k = 1; k <= catalog.sample_size(); ++k) {
    f[k - 1] = (static_cast<double>(k) - 1.0) / (n - 1.0) * (N - 1.0) + 1.0;
  }
  return MappingTable(std::move(f), catalog);
}

// Midpoint of the Hoeffding lower/upper location bounds.
inline MappingTable bound_map(const CatalogSpec& catalog) {
  const double N = static_cast<double>(catalog.items());
  const double n = static_cast<double>(catalog.sample_size());
  std::vector<double> f(catalog.sample_size());
  for (Count k = 1; k <= catalog.sample_size(); ++k) {
    const double raw =
        std::floor((static_cast<double>(k) - 0.5) * (N - 1.0) / (n - 1.0) + 0.5);
    f[k - 1] = std::clamp(raw, 1.0, N);
  }
  return MappingTable(std::move(f), catalog);
}

inline MappingTable uniform_map(const CatalogSpec& catalog) {
  const double N = static_cast<double>(catalog.items());
  const double n = static_cast<double>(catalog.sample_size());
  std::vector<double> f(catalog.sample_size());
  for (Count k = 1; k <= catalog.sample_size(); ++k) {
    f[k - 1] = static_cast<double>(k) * (N - 1.0) / n + 1.0;
  }
  return MappingTable(std::move(f), catalog);
}

namespace detail {

inline void check_shape(double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError("Beta shape a must be a positive finite number");
  }
}

// ln of a C(n - 1, k) B(a + k, n - k): the k-th increment of T.
inline double log_beta_increment(double shape, Count n, Count k) {
  return std::log(shape) +
         log_choose(static_cast<double>(n - 1), static_cast<double>(k)) +
         log_beta(shape + static_cast<double>(k), static_cast<double>(n - k));
}

}  // namespace detail

inline double beta_first(double shape, const CatalogSpec& catalog) {
  detail::check_shape(shape);
  const double N = static_cast<double>(catalog.items());
  const double log_t1 =
      std::log(shape) + log_beta(shape, static_cast<double>(catalog.sample_size()));
  return (N - 1.0) * std::exp(log_t1 / shape) + 1.0;
}

inline MappingTable beta_map_table(double shape, const CatalogSpec& catalog) {
  detail::check_shape(shape);
  const Count n = catalog.sample_size();
  const double N = static_cast<double>(catalog.items());
  std::vector<double> f(n);
  CompensatedSum t;
  for (Count k = 0; k < n; ++k) {
    // After adding increment k, t holds T_{k+1}.
    t.add(std::exp(detail::log_beta_increment(shape, n, k)));
    const double value = (N - 1.0) * std::pow(t.value(), 1.0 / shape) + 1.0;
    if (!std::isfinite(value)) {
      throw ComputationError("Beta recurrence overflowed at k=" +
                             std::to_string(k + 1));
    }
    f[k] = value;
  }
  return MappingTable(std::move(f), catalog);
}

enum class MapKind { Linear, Bound, Uniform, BetaFixed, BetaFitted };

struct FitConfig {
  double init_a = 0.5;
  double tol = 1e-6;
  Count max_iter = 100;
};

// Mapping family choice; `shape` is set for BetaFixed, `fit` for BetaFitted.
struct MappingSpec {
  MapKind kind = MapKind::Bound;
  std::optional<double> shape;
  std::optional<FitConfig> fit;

  // linear | bound | uniform | beta@<a> | beta@P (case-insensitive prefix).
  static MappingSpec parse(std::string_view label) {
    std::string lower(label);
    for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "linear") return {MapKind::Linear, std::nullopt, std::nullopt};
    if (lower == "bound") return {MapKind::Bound, std::nullopt, std::nullopt};
    if (lower == "uniform") return {MapKind::Uniform, std::nullopt, std::nullopt};
    if (lower.rfind("beta@", 0) == 0) {
      const std::string_view rest = std::string_view(lower).substr(5);
      if (rest == "p") return {MapKind::BetaFitted, std::nullopt, FitConfig{}};
      double a = 0.0;
      const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), a);
      if (rest.empty() || ec != std::errc{} || ptr != rest.data() + rest.size()) {
        throw ConfigError("bad Beta shape in mapping label '" + std::string(label) + "'");
      }
      detail::check_shape(a);
      return {MapKind::BetaFixed, a, std::nullopt};
    }
    throw ConfigError("unknown mapping label '" + std::string(label) +
                      "' (expected linear, bound, uniform, beta@<a> or beta@P)");
  }

  void validate() const {
    if (shape) detail::check_shape(*shape);
    if (fit) {
      detail::check_shape(fit->init_a);
      if (!(fit->tol > 0.0)) throw DomainError("fit tolerance must be > 0");
      if (fit->max_iter < 1) throw DomainError("fit max_iter must be >= 1");
    }
    if (kind == MapKind::BetaFixed && !shape) {
      throw ConfigError("beta map needs a shape parameter");
    }
    if (kind == MapKind::BetaFitted && !fit) {
      throw ConfigError("fitted beta map needs a fit configuration");
    }
  }
};

// Builds the table for every non-fitted family.
inline MappingTable make_table(const MappingSpec& spec, const CatalogSpec& catalog) {
  spec.validate();
  switch (spec.kind) {
    case MapKind::Linear:
      return linear_map(catalog);
    case MapKind::Bound:
      return bound_map(catalog);
    case MapKind::Uniform:
      return uniform_map(catalog);
    case MapKind::BetaFixed:
      return beta_map_table(*spec.shape, catalog);
    case MapKind::BetaFitted:
      break;
  }
  throw ConfigError("beta@P needs sampled ranks; use fit_beta_param first");
}

struct FitTrace {
  std::vector<double> iterates;  // a^(0) = init_a, a^(1), ...
  bool converged = false;
  double final_a = 0.0;
};

class FitError : public ComputationError {
 public:
  FitError(const std::string& what, FitTrace trace)
      : ComputationError(what), trace_(std::move(trace)) {}
  const FitTrace& trace() const noexcept { return trace_; }

 private:
  FitTrace trace_;
};

// One maximum-likelihood update of the Beta(a, 1) shape:
//   a' = -M / sum_u ln((f(r^u) - 1)/(N - 1)).
// The ratio is clamped into [1e-12, 1] before the logarithm.
inline double fit_update(const SampledRankRecord& sampled,
                         const MappingTable& table) {
  if (sampled.sample_size() != table.catalog().sample_size()) {
    throw ConfigError("sampled ranks and mapping table disagree on n");
  }
  constexpr double kFloor = 1e-12;
  const double N = static_cast<double>(table.catalog().items());
  CompensatedSum log_sum;
  for (Rank r : sampled.ranks()) {
    const double ratio = std::clamp((table.at(r) - 1.0) / (N - 1.0), kFloor, 1.0);
    log_sum.add(std::log(ratio));
  }
  return -static_cast<double>(sampled.users()) / log_sum.value();
}

// Iterates fit_update from cfg.init_a, rebuilding the Beta table each step.
// Throws FitError when an iterate leaves (0, 100].
inline FitTrace fit_beta_param(const SampledRankRecord& sampled,
                               const CatalogSpec& catalog,
                               const FitConfig& cfg = {}) {
  constexpr double kMinShape = 1e-4;
  constexpr double kMaxShape = 100.0;
  MappingSpec{MapKind::BetaFitted, std::nullopt, cfg}.validate();
  if (sampled.sample_size() != catalog.sample_size()) {
    throw ConfigError("sampled ranks use n=" + std::to_string(sampled.sample_size()) +
                      " but catalog has n=" + std::to_string(catalog.sample_size()));
  }
  FitTrace trace;
  double a = cfg.init_a;
  trace.iterates.push_back(a);
  for (Count i = 0; i < cfg.max_iter; ++i) {
    const double next = fit_update(sampled, beta_map_table(a, catalog));
    trace.iterates.push_back(next);
    if (!(next > 0.0 && next <= kMaxShape)) {
      trace.final_a = a;
      throw FitError("Beta shape fit diverged at iteration " +
                         std::to_string(i + 1) + " (a=" + std::to_string(next) + ")",
                     std::move(trace));
    }
    const double clamped = std::max(next, kMinShape);
    trace.iterates.back() = clamped;
    const bool done = std::abs(clamped - a) < cfg.tol;
    a = clamped;
    if (done) {
      trace.converged = true;
      break;
    }
  }
  trace.final_a = a;
  return trace;
}

// HR@f(k), reading the global curve at clamp(floor(f(k)), 1, N). The floor
// absorbs relative round-off up to 1e-9 so f(n) = N - 1e-12 still reads HR@N.
inline double evaluate_mapped_hr(const HitRatioCurve& global,
                                 const MappingTable& table, Count k) {
  const Count N = table.catalog().items();
  if (global.max_cutoff() != N) {
    throw ConfigError("global curve covers " + std::to_string(global.max_cutoff()) +
                      " cutoffs but mapping targets N=" + std::to_string(N));
  }
  const double f = table.at(k);
  const double floored = std::floor(f + 1e-9 * std::abs(f));
  const double index = std::clamp(floored, 1.0, static_cast<double>(N));
  return global.at(static_cast<Count>(index));
}

// HR@f(k) for k = 1..n.
inline HitRatioCurve mapped_hr_curve(const HitRatioCurve& global,
                                     const MappingTable& table) {
  std::vector<double> out(table.catalog().sample_size());
  for (Count k = 1; k <= out.size(); ++k) out[k - 1] = evaluate_mapped_hr(global, table, k);
  return HitRatioCurve(std::move(out));
}

}  // namespace sampled_hr

#endif  // SAMPLED_HR_MAPPING_HPP_
