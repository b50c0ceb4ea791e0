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

// Global and sampled Hit-Ratio curves.
//
// HR@K is the empirical CDF of the global ranks. SHR@k is the fraction of
// users whose relevant item lands in the top k after ranking it against
// n - 1 sampled items; its expectation and variance follow exactly from the
// rank histogram and the per-rank tail kernel p^R(k).

#ifndef SAMPLED_HR_METRICS_HPP_
#define SAMPLED_HR_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "sampled_hr/core.hpp"
#include "sampled_hr/dist.hpp"
#include "sampled_hr/errors.hpp"
#include "sampled_hr/rng.hpp"

namespace sampled_hr {

enum class SchemeKind { WithReplacement, WithoutReplacement, IrrelevantOnly };

// How the n - 1 comparison items are drawn. IrrelevantOnly draws without
// replacement from a per-user catalog of N_u items (the user's relevant item
// plus the items the user never interacted with); the profile's ranks are
// then ranks among those N_u items.
class SamplingScheme {
 public:
  static SamplingScheme with_replacement() {
    return SamplingScheme(SchemeKind::WithReplacement, std::nullopt);
  }
  static SamplingScheme without_replacement() {
    return SamplingScheme(SchemeKind::WithoutReplacement, std::nullopt);
  }
  static SamplingScheme irrelevant_only(std::vector<Count> per_user_items) {
    return SamplingScheme(SchemeKind::IrrelevantOnly, std::move(per_user_items));
  }

  SamplingScheme(SchemeKind kind, std::optional<std::vector<Count>> per_user_items)
      : kind_(kind), per_user_(std::move(per_user_items)) {
    if (kind_ == SchemeKind::IrrelevantOnly && !per_user_) {
      throw ConfigError("irrelevant-only scheme needs per-user effective_N");
    }
    if (kind_ != SchemeKind::IrrelevantOnly && per_user_) {
      throw ConfigError("per-user catalog sizes are only valid for the "
                        "irrelevant-only scheme");
    }
  }

  SchemeKind kind() const noexcept { return kind_; }
  const std::optional<std::vector<Count>>& per_user_items() const noexcept {
    return per_user_;
  }

  // Checks the scheme against a profile of `users` users and sample size n.
  void validate(Count users, const CatalogSpec& catalog) const {
    if (!per_user_) return;
    if (per_user_->size() != users) {
      throw ConfigError("per-user effective_N count (" +
                        std::to_string(per_user_->size()) +
                        ") does not match user count (" +
                        std::to_string(users) + ")");
    }
    for (std::size_t u = 0; u < users; ++u) {
      if ((*per_user_)[u] < catalog.sample_size()) {
        throw ConfigError("user #" + std::to_string(u + 1) + " has effective_N " +
                          std::to_string((*per_user_)[u]) +
                          " below sample size n=" +
                          std::to_string(catalog.sample_size()));
      }
    }
  }

 private:
  SchemeKind kind_;
  std::optional<std::vector<Count>> per_user_;
};

struct MonteCarloConfig {
  std::uint64_t seed = 0;
  Count runs = 1;
  // Worker threads; 0 picks the hardware concurrency. Results never depend
  // on this value.
  unsigned threads = 0;
};

struct MonteCarloCurve {
  HitRatioCurve mean;
  // Standard error of the mean across runs; all zeros when runs == 1.
  std::vector<double> std_error;
  Count runs = 1;
};

namespace detail {

inline Kernel kernel_for(const SamplingScheme& scheme) {
  switch (scheme.kind()) {
    case SchemeKind::WithReplacement:
      return Kernel::Binomial;
    case SchemeKind::WithoutReplacement:
      return Kernel::Hypergeometric;
    case SchemeKind::IrrelevantOnly:
      break;
  }
  throw UnsupportedError(
      "exact expectation is not defined for the irrelevant-only scheme; "
      "use the Monte Carlo estimate");
}

// Runs body(begin, end) over [0, count) on up to `threads` workers.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  unsigned workers = threads == 0 ? std::thread::hardware_concurrency() : threads;
  workers = std::max(1u, workers);
  const std::size_t min_chunk = 1024;
  workers = static_cast<unsigned>(
      std::min<std::size_t>(workers, (count + min_chunk - 1) / min_chunk));
  if (workers <= 1) {
    body(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(count, w * chunk);
    const std::size_t end = std::min(count, begin + chunk);
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
}

// Draws X ~ Hypergeometric(population, successes, draws) sequentially.
inline Count draw_hypergeometric(Count population, Count successes, Count draws,
                                 SplitMix64& rng) {
  Count hits = 0;
  for (Count i = 0; i < draws; ++i) {
    const auto pick = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(rng()) * population) >> 64);
    if (pick < successes) {
      ++hits;
      --successes;
    }
    --population;
  }
  return hits;
}

struct ExactMoments {
  std::vector<double> mean;
  std::vector<double> spread;  // sum_R W_R p^R (1 - p^R)
};

inline ExactMoments exact_moments(const RankHistogram& hist,
                                  const SamplingScheme& scheme,
                                  const CatalogSpec& catalog) {
  if (hist.items() != catalog.items()) {
    throw ConfigError("histogram has " + std::to_string(hist.items()) +
                      " bins but catalog has N=" +
                      std::to_string(catalog.items()));
  }
  const Kernel kernel = kernel_for(scheme);
  const Count n = catalog.sample_size();
  std::vector<CompensatedSum> mean(n), spread(n);
  const auto mass = hist.mass();
  for (Rank r = 1; r <= catalog.items(); ++r) {
    const double w = mass[r - 1];
    if (w == 0.0) continue;
    const auto tail = tail_curve(kernel, r, catalog);
    for (Count k = 0; k < n; ++k) {
      mean[k].add(w * tail[k]);
      spread[k].add(w * tail[k] * (1.0 - tail[k]));
    }
  }
  ExactMoments out;
  out.mean.reserve(n);
  out.spread.reserve(n);
  for (Count k = 0; k < n; ++k) {
    out.mean.push_back(mean[k].value());
    out.spread.push_back(spread[k].value());
  }
  out.mean[n - 1] = 1.0;
  out.spread[n - 1] = 0.0;
  return out;
}

}  // namespace detail

// HR@K = (1/M) #{u : R_u <= K} for K = 1..N.
inline HitRatioCurve hr_curve(const RankProfile& profile) {
  std::vector<std::size_t> counts(profile.items(), 0);
  for (Rank r : profile.ranks()) ++counts[r - 1];
  std::vector<double> values(profile.items());
  std::size_t cumulative = 0;
  const double m = static_cast<double>(profile.users());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    cumulative += counts[i];
    values[i] = static_cast<double>(cumulative) / m;
  }
  return HitRatioCurve(std::move(values));
}

// E[SHR@k] = sum_R W_R p^R(k) for k = 1..n.
inline HitRatioCurve expected_shr_curve(const RankHistogram& hist,
                                        const SamplingScheme& scheme,
                                        const CatalogSpec& catalog) {
  return HitRatioCurve(detail::exact_moments(hist, scheme, catalog).mean);
}

// Var[SHR@k] = (1/M) sum_R W_R p^R(k) (1 - p^R(k)) for k = 1..n.
inline std::vector<double> shr_variance_curve(const RankHistogram& hist,
                                              const SamplingScheme& scheme,
                                              const CatalogSpec& catalog,
                                              Count users) {
  if (users < 1) throw DomainError("user count must be >= 1");
  auto spread = detail::exact_moments(hist, scheme, catalog).spread;
  const double m = static_cast<double>(users);
  for (double& v : spread) v /= m;
  return spread;
}

// Draws one sampled rank r in [1, n] for a user with global rank R.
// `user` indexes the per-user catalog of the irrelevant-only scheme.
inline Rank sample_rank(Rank global_rank, const SamplingScheme& scheme,
                        const CatalogSpec& catalog, SplitMix64& rng,
                        std::optional<std::size_t> user = std::nullopt) {
  const Count draws = catalog.sample_size() - 1;
  Count items = catalog.items();
  if (scheme.kind() == SchemeKind::IrrelevantOnly) {
    const auto& per_user = scheme.per_user_items();
    if (!user || !per_user || *user >= per_user->size()) {
      throw ConfigError("irrelevant-only sampling needs the user's effective_N");
    }
    items = (*per_user)[*user];
    if (items < catalog.sample_size()) {
      throw ConfigError("effective_N below sample size n");
    }
  }
  if (global_rank < 1 || global_rank > items) {
    throw DomainError("global rank " + std::to_string(global_rank) +
                      " outside [1, " + std::to_string(items) + "]");
  }
  if (global_rank == 1) return 1;
  if (scheme.kind() == SchemeKind::WithReplacement) {
    const double p = static_cast<double>(global_rank - 1) /
                     static_cast<double>(items - 1);
    Count hits = 0;
    for (Count i = 0; i < draws; ++i) hits += rng.uniform() < p ? 1 : 0;
    return hits + 1;
  }
  return detail::draw_hypergeometric(items - 1, global_rank - 1, draws, rng) + 1;
}

// One run of sampled ranks; user u draws from make_stream(seed, u, run).
inline SampledRankRecord sample_ranks(const RankProfile& profile,
                                      const SamplingScheme& scheme,
                                      const CatalogSpec& catalog,
                                      std::uint64_t seed, std::uint64_t run,
                                      unsigned threads = 0) {
  if (scheme.kind() != SchemeKind::IrrelevantOnly &&
      profile.items() != catalog.items()) {
    throw ConfigError("profile catalog N=" + std::to_string(profile.items()) +
                      " differs from N=" + std::to_string(catalog.items()));
  }
  scheme.validate(profile.users(), catalog);
  std::vector<Rank> out(profile.users());
  detail::parallel_for(profile.users(), threads,
                       [&](std::size_t begin, std::size_t end) {
                         for (std::size_t u = begin; u < end; ++u) {
                           auto rng = make_stream(seed, u, run);
                           out[u] = sample_rank(profile[u], scheme, catalog, rng, u);
                         }
                       });
  return SampledRankRecord(std::move(out), catalog.sample_size());
}

// SHR@k = (1/M) sum_u 1{r^u <= k} for k = 1..n.
inline HitRatioCurve shr_curve(const SampledRankRecord& sampled) {
  const Count n = sampled.sample_size();
  std::vector<std::size_t> counts(n, 0);
  for (Rank r : sampled.ranks()) ++counts[r - 1];
  std::vector<double> values(n);
  std::size_t cumulative = 0;
  const double m = static_cast<double>(sampled.users());
  for (Count k = 0; k < n; ++k) {
    cumulative += counts[k];
    values[k] = static_cast<double>(cumulative) / m;
  }
  return HitRatioCurve(std::move(values));
}

// Mean SHR curve over cfg.runs independent runs. Output is a pure function
// of the inputs and cfg.seed.
inline MonteCarloCurve shr_curve_monte_carlo(const RankProfile& profile,
                                             const SamplingScheme& scheme,
                                             const CatalogSpec& catalog,
                                             const MonteCarloConfig& cfg) {
  if (cfg.runs < 1) throw DomainError("Monte Carlo runs must be >= 1");
  const Count n = catalog.sample_size();
  std::vector<double> sum(n, 0.0), sum_sq(n, 0.0);
  std::vector<std::vector<double>> per_run;
  per_run.reserve(cfg.runs);
  for (Count run = 0; run < cfg.runs; ++run) {
    const auto curve =
        shr_curve(sample_ranks(profile, scheme, catalog, cfg.seed, run, cfg.threads));
    per_run.emplace_back(curve.values().begin(), curve.values().end());
  }
  const double runs = static_cast<double>(cfg.runs);
  std::vector<double> mean(n, 0.0), se(n, 0.0);
  for (Count k = 0; k < n; ++k) {
    CompensatedSum acc;
    for (const auto& values : per_run) acc.add(values[k]);
    mean[k] = acc.value() / runs;
    if (cfg.runs > 1) {
      CompensatedSum dev;
      for (const auto& values : per_run) {
        const double d = values[k] - mean[k];
        dev.add(d * d);
      }
      se[k] = std::sqrt(dev.value() / (runs - 1.0)) / std::sqrt(runs);
    }
  }
  return {HitRatioCurve(std::move(mean)), std::move(se), cfg.runs};
}

// Maps a uniform u in [0, 1) to a rank under the Beta(a, 1) rank model:
// x = u^(1/a) is the inverse CDF of Beta(a, 1), and R = 1 + floor(x N)
// (capped at N) gives Pr(R <= K) = (K / N)^a exactly.
inline Rank beta_rank_from_uniform(double u, double shape, Count items) {
  if (!(shape > 0.0)) throw DomainError("Beta shape a must be > 0");
  const double x = std::pow(u, 1.0 / shape);
  const double scaled = std::floor(x * static_cast<double>(items));
  const Rank r = 1 + static_cast<Rank>(std::max(0.0, scaled));
  return std::min<Rank>(r, items);
}

// Synthetic profile with ranks drawn from the Beta(a, 1) rank model.
// User u draws from make_stream(seed, u, 0).
inline RankProfile simulate_profile(double shape, Count users, Count items,
                                    std::uint64_t seed) {
  if (!(shape > 0.0)) throw DomainError("Beta shape a must be > 0");
  if (users < 1) throw DomainError("user count M must be >= 1");
  if (items < 2) throw DomainError("catalog size N must be >= 2");
  std::vector<Rank> ranks(users);
  for (Count u = 0; u < users; ++u) {
    auto rng = make_stream(seed, u, 0);
    ranks[u] = beta_rank_from_uniform(rng.uniform(), shape, items);
  }
  return RankProfile(std::move(ranks), items);
}

}  // namespace sampled_hr

#endif  // SAMPLED_HR_METRICS_HPP_
