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

// Special functions and the exact per-user probability kernels for the
// sampled rank r^u = X^u + 1, where X^u counts sampled items that outrank the
// user's relevant item:
//
//   with replacement:     X^u ~ Binomial(n - 1, (R_u - 1) / (N - 1))
//   without replacement:  X^u ~ Hypergeometric(N - 1, R_u - 1, n - 1)
//
// Tail probabilities Pr(r^u <= k) are summed term by term in log space with
// compensated summation, and are defined as 1 whenever R_u < k.

#ifndef SAMPLED_HR_DIST_HPP_
#define SAMPLED_HR_DIST_HPP_

#include <math.h>  // lgamma_r

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sampled_hr/core.hpp"
#include "sampled_hr/errors.hpp"

namespace sampled_hr {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw DomainError("log_gamma requires x > 0, got " + std::to_string(x));
  }
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

inline double log_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("beta function requires positive arguments");
  }
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

inline double beta_fn(double a, double b) { return std::exp(log_beta(a, b)); }

// ln C(n, k) for 0 <= k <= n.
inline double log_choose(double n, double k) {
  if (k < 0.0 || k > n) {
    throw DomainError("log_choose requires 0 <= k <= n");
  }
  if (k == 0.0 || k == n) return 0.0;
  return log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0);
}

enum class Kernel { Binomial, Hypergeometric };

namespace detail {

inline constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406;  // ln sqrt(2 pi)

// Stirling-series remainder ln(n!) - [(n + 1/2) ln n - n + ln sqrt(2 pi)].
inline double stirling_error(double n) {
  constexpr double S0 = 1.0 / 12.0;
  constexpr double S1 = 1.0 / 360.0;
  constexpr double S2 = 1.0 / 1260.0;
  constexpr double S3 = 1.0 / 1680.0;
  constexpr double S4 = 1.0 / 1188.0;
  if (n < 16.0) {
    return log_gamma(n + 1.0) - (n + 0.5) * std::log(n) + n - kLogSqrt2Pi;
  }
  const double n1 = 1.0 / n;
  const double n2 = n1 * n1;
  if (n > 500.0) return (S0 - S1 * n2) * n1;
  if (n > 80.0) return (S0 - (S1 - S2 * n2) * n2) * n1;
  if (n > 35.0) return (S0 - (S1 - (S2 - S3 * n2) * n2) * n2) * n1;
  return (S0 - (S1 - (S2 - (S3 - S4 * n2) * n2) * n2) * n2) * n1;
}

// Deviance term x ln(x / np) + np - x, by series when x is close to np.
inline double deviance(double x, double np) {
  if (std::abs(x - np) < 0.1 * (x + np)) {
    const double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v * v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return x * std::log(x / np) + np - x;
}

// ln Pr(Binomial(n, p) = x) by the saddle-point expansion (Loader 2000);
// q = 1 - p is passed separately to keep it exact. -inf for zero mass.
inline double log_binomial_density(double x, double n, double p, double q) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (x < 0.0 || x > n) return kNegInf;
  if (p == 0.0) return x == 0.0 ? 0.0 : kNegInf;
  if (q == 0.0) return x == n ? 0.0 : kNegInf;
  if (x == 0.0) {
    if (n == 0.0) return 0.0;
    return p < 0.1 ? -deviance(n, n * q) - n * p : n * std::log(q);
  }
  if (x == n) {
    return q < 0.1 ? -deviance(n, n * p) - n * q : n * std::log(p);
  }
  const double lc = stirling_error(n) - stirling_error(x) - stirling_error(n - x) -
                    deviance(x, n * p) - deviance(n - x, n * q);
  const double lf = 2.0 * kLogSqrt2Pi + std::log(x) + std::log1p(-x / n);
  return lc - 0.5 * lf;
}

inline void check_rank(Rank global_rank, const CatalogSpec& catalog) {
  if (global_rank < 1 || global_rank > catalog.items()) {
    throw DomainError("global rank " + std::to_string(global_rank) +
                      " outside [1, " + std::to_string(catalog.items()) + "]");
  }
}

inline void check_cutoff(Count k, const CatalogSpec& catalog) {
  if (k < 1 || k > catalog.sample_size()) {
    throw DomainError("cutoff " + std::to_string(k) + " outside [1, " +
                      std::to_string(catalog.sample_size()) + "]");
  }
}

// Pr(X = l) for l = 0..n-1.
inline std::vector<double> binomial_terms(Rank global_rank, const CatalogSpec& catalog) {
  const Count n = catalog.sample_size();
  const double trials = static_cast<double>(n - 1);
  const double denom = static_cast<double>(catalog.items() - 1);
  const double p = static_cast<double>(global_rank - 1) / denom;
  const double q = static_cast<double>(catalog.items() - global_rank) / denom;
  std::vector<double> pmf(n);
  for (Count l = 0; l < n; ++l) {
    pmf[l] = std::exp(log_binomial_density(static_cast<double>(l), trials, p, q));
  }
  return pmf;
}

// Pr(X = l) for l = 0..n-1, written as a ratio of binomial densities:
// Bin(l; s, p) Bin(d - l; f, p) / Bin(d; s + f, p) with p = d / (s + f).
inline std::vector<double> hypergeometric_terms(Rank global_rank,
                                                const CatalogSpec& catalog) {
  const Count n = catalog.sample_size();
  const double draws = static_cast<double>(n - 1);
  const double successes = static_cast<double>(global_rank - 1);
  const double failures = static_cast<double>(catalog.items() - global_rank);
  const double population = successes + failures;
  const double p = draws / population;
  const double q = (population - draws) / population;
  const double log_norm = log_binomial_density(draws, population, p, q);
  std::vector<double> pmf(n);
  for (Count l = 0; l < n; ++l) {
    const double x = static_cast<double>(l);
    const double a = log_binomial_density(x, successes, p, q);
    const double b = log_binomial_density(draws - x, failures, p, q);
    pmf[l] = (std::isinf(a) || std::isinf(b)) ? 0.0 : std::exp(a + b - log_norm);
  }
  return pmf;
}

inline std::vector<double> kernel_terms(Kernel kernel, Rank global_rank,
                                        const CatalogSpec& catalog) {
  return kernel == Kernel::Binomial ? binomial_terms(global_rank, catalog)
                                    : hypergeometric_terms(global_rank, catalog);
}

// Tail from whichever side of the CDF is smaller, so values near 1 keep
// full absolute precision.
inline double pick_tail(double lower, double upper) {
  return std::clamp(lower <= upper ? lower : 1.0 - upper, 0.0, 1.0);
}

}  // namespace detail

// Pr(r^u = r) for r = 1..n, returned at index r - 1.
inline std::vector<double> sampled_rank_pmf(Kernel kernel, Rank global_rank,
                                            const CatalogSpec& catalog) {
  detail::check_rank(global_rank, catalog);
  return detail::kernel_terms(kernel, global_rank, catalog);
}

// p^R(k) for every k = 1..n, at index k - 1. Agrees bit-for-bit with
// tail_prob(kernel, k, R, catalog).
inline std::vector<double> tail_curve(Kernel kernel, Rank global_rank,
                                      const CatalogSpec& catalog) {
  detail::check_rank(global_rank, catalog);
  const Count n = catalog.sample_size();
  const auto pmf = detail::kernel_terms(kernel, global_rank, catalog);
  // upper[k - 1] = sum_{l >= k} pmf[l], accumulated from the top.
  std::vector<double> upper(n, 0.0);
  CompensatedSum up;
  for (Count l = n - 1; l >= 1; --l) {
    up.add(pmf[l]);
    upper[l - 1] = up.value();
  }
  std::vector<double> tail(n, 1.0);
  CompensatedSum lo;
  for (Count k = 1; k < n; ++k) {
    lo.add(pmf[k - 1]);
    if (global_rank >= k) tail[k - 1] = detail::pick_tail(lo.value(), upper[k - 1]);
  }
  return tail;
}

// Pr(r^u <= k) for a user whose relevant item has global rank R.
inline double tail_prob(Kernel kernel, Count k, Rank global_rank,
                        const CatalogSpec& catalog) {
  detail::check_cutoff(k, catalog);
  detail::check_rank(global_rank, catalog);
  const Count n = catalog.sample_size();
  if (global_rank < k || k == n) return 1.0;
  const auto pmf = detail::kernel_terms(kernel, global_rank, catalog);
  CompensatedSum lo, up;
  for (Count l = 0; l < k; ++l) lo.add(pmf[l]);
  for (Count l = n - 1; l >= k; --l) up.add(pmf[l]);
  return detail::pick_tail(lo.value(), up.value());
}

inline double binom_tail_prob(Count k, Rank global_rank,
                              const CatalogSpec& catalog) {
  return tail_prob(Kernel::Binomial, k, global_rank, catalog);
}

inline double hyper_tail_prob(Count k, Rank global_rank,
                              const CatalogSpec& catalog) {
  return tail_prob(Kernel::Hypergeometric, k, global_rank, catalog);
}

struct ConcentrationBound {
  Count users;
  double threshold;
  double bound;
};

// Hoeffding: Pr(|SHR@k - E[SHR@k]| >= t) <= 2 exp(-2 M t^2).
inline ConcentrationBound hoeffding_population_bound(Count users,
                                                     double threshold) {
  if (users < 1) throw DomainError("user count must be >= 1");
  if (!(threshold >= 0.0)) throw DomainError("threshold must be >= 0");
  const double m = static_cast<double>(users);
  return {users, threshold, 2.0 * std::exp(-2.0 * m * threshold * threshold)};
}

}  // namespace sampled_hr

#endif  // SAMPLED_HR_DIST_HPP_
