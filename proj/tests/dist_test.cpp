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

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "sampled_hr/dist.hpp"

namespace sampled_hr {
namespace {

TEST(LogGamma, IntegerValues) {
  EXPECT_EQ(log_gamma(1.0), 0.0);
  EXPECT_EQ(log_gamma(2.0), 0.0);
  EXPECT_NEAR(log_gamma(5.0), std::log(24.0), 1e-15);
  EXPECT_NEAR(log_gamma(5.0), 3.1780538303479458, 1e-14);
}

TEST(LogGamma, RejectsNonPositive) {
  EXPECT_THROW(log_gamma(0.0), DomainError);
  EXPECT_THROW(log_gamma(-1.5), DomainError);
  EXPECT_THROW(log_gamma(std::nan("")), DomainError);
}

TEST(LogGamma, RelativeAccuracyAgainstHighPrecision) {
  using Big = boost::multiprecision::cpp_bin_float_50;
  for (double x : {0.1, 0.25, 0.5, 0.75, 1.5, 2.5, 3.7, 10.0, 123.4, 1e3, 5e4, 1e6}) {
    const double ref = static_cast<double>(boost::math::lgamma(Big(x)));
    EXPECT_LE(std::abs(log_gamma(x) - ref), 1e-12 * std::abs(ref)) << "x=" << x;
  }
}

TEST(BetaFn, KnownValues) {
  for (double n : {1.0, 2.0, 10.0, 100.0, 3705.0}) {
    EXPECT_NEAR(beta_fn(1.0, n), 1.0 / n, 1e-10 / n);
  }
  EXPECT_NEAR(beta_fn(2.0, 3.0), 1.0 / 12.0, 1e-10 / 12.0);
  EXPECT_NEAR(beta_fn(0.5, 0.5), std::numbers::pi, 1e-10 * std::numbers::pi);
  EXPECT_THROW(beta_fn(0.0, 1.0), DomainError);
  EXPECT_THROW(beta_fn(1.0, -2.0), DomainError);
}

TEST(BinomTail, Examples) {
  EXPECT_EQ(binom_tail_prob(1, 1, CatalogSpec(3706, 100)), 1.0);
  EXPECT_EQ(binom_tail_prob(1, 1, CatalogSpec(5, 3)), 1.0);
  EXPECT_EQ(binom_tail_prob(5, 3, CatalogSpec(3706, 100)), 1.0);
  EXPECT_NEAR(binom_tail_prob(1, 3, CatalogSpec(5, 3)), 0.25, 1e-15);
}

TEST(BinomTail, RangeErrors) {
  const CatalogSpec c(10, 4);
  EXPECT_THROW(binom_tail_prob(0, 3, c), DomainError);
  EXPECT_THROW(binom_tail_prob(5, 3, c), DomainError);
  EXPECT_THROW(binom_tail_prob(2, 0, c), DomainError);
  EXPECT_THROW(binom_tail_prob(2, 11, c), DomainError);
}

TEST(HyperTail, Examples) {
  EXPECT_EQ(hyper_tail_prob(1, 1, CatalogSpec(5, 3)), 1.0);
  EXPECT_EQ(hyper_tail_prob(1, 1, CatalogSpec(3706, 100)), 1.0);
  EXPECT_NEAR(hyper_tail_prob(1, 3, CatalogSpec(5, 3)), 1.0 / 6.0, 1e-15);
  for (Rank R : {1u, 2u, 50u, 3706u}) {
    EXPECT_EQ(hyper_tail_prob(100, R, CatalogSpec(3706, 100)), 1.0);
  }
  EXPECT_THROW(hyper_tail_prob(4, 1, CatalogSpec(5, 3)), DomainError);
}

TEST(BinomTail, MatchesExactRationalSum) {
  for (unsigned N = 2; N <= 20; ++N) {
    for (unsigned n = 2; n <= std::min(12u, N); ++n) {
      const CatalogSpec c(N, n);
      for (unsigned R = 1; R <= N; ++R) {
        for (unsigned k = 1; k <= n; ++k) {
          const double ref = static_cast<double>(oracle::binom_tail_rational(k, R, N, n));
          ASSERT_NEAR(binom_tail_prob(k, R, c), ref, 1e-12)
              << "N=" << N << " n=" << n << " R=" << R << " k=" << k;
        }
      }
    }
  }
}

TEST(HyperTail, MatchesSubsetEnumeration) {
  for (unsigned N = 2; N <= 12; ++N) {
    for (unsigned n = 2; n <= N; ++n) {
      const CatalogSpec c(N, n);
      for (unsigned R = 1; R <= N; ++R) {
        for (unsigned k = 1; k <= n; ++k) {
          const double ref = static_cast<double>(oracle::hyper_tail_enumerate(k, R, N, n));
          ASSERT_NEAR(hyper_tail_prob(k, R, c), ref, 1e-14)
              << "N=" << N << " n=" << n << " R=" << R << " k=" << k;
        }
      }
    }
  }
}

TEST(HyperTail, SampleNearCatalogMatchesRecursivePmf) {
  constexpr unsigned N = 50, n = 45;
  const CatalogSpec c(N, n);
  for (unsigned R = 1; R <= N; ++R) {
    const auto pmf = oracle::hyper_pmf_recursive(N - 1, R - 1, n - 1);
    long double cdf = 0.0L;
    for (unsigned k = 1; k <= n; ++k) {
      cdf += pmf[k - 1];
      const double ref = R < k ? 1.0 : static_cast<double>(cdf);
      ASSERT_NEAR(hyper_tail_prob(k, R, c), ref, 1e-12) << "R=" << R << " k=" << k;
    }
  }
}

TEST(Tails, MonotoneInCutoffAndRank) {
  for (const auto& c : {CatalogSpec(30, 10), CatalogSpec(500, 50), CatalogSpec(3706, 100)}) {
    for (Kernel kernel : {Kernel::Binomial, Kernel::Hypergeometric}) {
      const Count N = c.items(), n = c.sample_size();
      for (Count k = 1; k <= n; k += (n > 20 ? 7 : 1)) {
        double prev = 2.0;
        for (Rank R = 1; R <= N; R += (N > 100 ? 13 : 1)) {
          const double p = tail_prob(kernel, k, R, c);
          EXPECT_GE(p, 0.0);
          EXPECT_LE(p, 1.0);
          if (R >= k) {
            EXPECT_LE(p, prev + 1e-15) << "k=" << k << " R=" << R;
          }
          prev = p;
        }
      }
      for (Rank R = 1; R <= N; R += (N > 100 ? 97 : 3)) {
        double prev = -1.0;
        for (Count k = 1; k <= n; ++k) {
          const double p = tail_prob(kernel, k, R, c);
          EXPECT_GE(p, prev - 1e-15);
          prev = p;
        }
      }
    }
  }
}

TEST(Tails, CurveAgreesWithPointwiseTail) {
  const CatalogSpec c(3706, 100);
  for (Kernel kernel : {Kernel::Binomial, Kernel::Hypergeometric}) {
    for (Rank R : {1u, 2u, 17u, 99u, 100u, 101u, 1234u, 3705u, 3706u}) {
      const auto curve = tail_curve(kernel, R, c);
      for (Count k = 1; k <= c.sample_size(); ++k) {
        EXPECT_EQ(curve[k - 1], tail_prob(kernel, k, R, c));
      }
    }
  }
}

TEST(Pmf, SumsToOneWithoutUnderflowAtLargeN) {
  const CatalogSpec c(139331, 1000);
  for (Kernel kernel : {Kernel::Binomial, Kernel::Hypergeometric}) {
    for (Rank R : {2u, 500u, 70000u, 139330u}) {
      const auto pmf = sampled_rank_pmf(kernel, R, c);
      CompensatedSum s;
      for (double p : pmf) {
        ASSERT_TRUE(std::isfinite(p));
        s.add(p);
      }
      EXPECT_NEAR(s.value(), 1.0, 1e-12) << "R=" << R;
    }
  }
}

TEST(BetaSumIdentity, TelescopesToOneOverA) {
  // sum_{k=0}^{n-1} C(n-1, k) B(a + k, n - k) = 1/a
  for (double a : {0.2, 0.5, 1.0, 2.0}) {
    for (unsigned n : {10u, 100u}) {
      CompensatedSum s;
      for (unsigned k = 0; k < n; ++k) {
        s.add(std::exp(log_choose(n - 1.0, k) + log_beta(a + k, n - k)));
      }
      EXPECT_NEAR(s.value(), 1.0 / a, 1e-9 / a) << "a=" << a << " n=" << n;
    }
  }
}

TEST(Hoeffding, Examples) {
  const auto b = hoeffding_population_bound(30000, 0.01);
  EXPECT_NEAR(b.bound, 2.0 * std::exp(-6.0), 1e-15);
  EXPECT_LE(b.bound, 0.005);
  EXPECT_NEAR(b.bound, 0.004957504353332717, 1e-15);
  EXPECT_EQ(hoeffding_population_bound(12345, 0.0).bound, 2.0);
  EXPECT_NEAR(hoeffding_population_bound(1, 1.0).bound, 0.2706705664732254, 1e-15);
  EXPECT_THROW(hoeffding_population_bound(10, -0.1), DomainError);
  EXPECT_THROW(hoeffding_population_bound(0, 0.1), DomainError);
}

}  // namespace
}  // namespace sampled_hr
