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

// Domain types shared by every module. Ranks are 1-based throughout: a
// global rank lies in [1, N] and a sampled rank lies in [1, n].

#ifndef SAMPLED_HR_CORE_HPP_
#define SAMPLED_HR_CORE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sampled_hr/errors.hpp"

namespace sampled_hr {

using Count = std::size_t;
using Rank = std::size_t;

// Catalog of N items from which n - 1 items are sampled per user; the
// target item is always part of the sample set, hence n includes it.
class CatalogSpec {
 public:
  CatalogSpec(Count items, Count sample_size) : N_(items), n_(sample_size) {
    if (N_ < 2) throw DomainError("catalog size N must be >= 2");
    if (n_ < 2) throw DomainError("sample size n must be >= 2");
    if (n_ > N_) {
      throw DomainError("sample size n=" + std::to_string(n_) +
                        " exceeds catalog size N=" + std::to_string(N_));
    }
  }

  Count items() const noexcept { return N_; }
  Count sample_size() const noexcept { return n_; }

  friend bool operator==(const CatalogSpec&, const CatalogSpec&) = default;

 private:
  Count N_;
  Count n_;
};

// Per-user global ranks of each user's single relevant item.
class RankProfile {
 public:
  RankProfile(std::vector<Rank> ranks, Count items)
      : ranks_(std::move(ranks)), N_(items) {
    if (N_ < 2) throw DomainError("catalog size N must be >= 2");
    if (ranks_.empty()) throw DomainError("rank profile has no users");
    for (std::size_t u = 0; u < ranks_.size(); ++u) {
      if (ranks_[u] < 1 || ranks_[u] > N_) {
        throw DomainError("rank " + std::to_string(ranks_[u]) + " of user #" +
                          std::to_string(u + 1) + " outside [1, " +
                          std::to_string(N_) + "]");
      }
    }
  }

  std::span<const Rank> ranks() const noexcept { return ranks_; }
  Count users() const noexcept { return ranks_.size(); }
  Count items() const noexcept { return N_; }
  Rank operator[](std::size_t u) const { return ranks_[u]; }

 private:
  std::vector<Rank> ranks_;
  Count N_;
};

// Empirical rank mass W_R; mass()[R - 1] is the fraction of users at rank R.
class RankHistogram {
 public:
  explicit RankHistogram(std::vector<double> mass) : mass_(std::move(mass)) {
    if (mass_.size() < 2) throw DomainError("histogram needs N >= 2 bins");
    double total = 0.0;
    for (double w : mass_) {
      if (!(w >= 0.0 && w <= 1.0)) {
        throw DomainError("histogram mass outside [0, 1]");
      }
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12 * static_cast<double>(mass_.size())) {
      throw DomainError("histogram mass does not sum to 1");
    }
  }

  std::span<const double> mass() const noexcept { return mass_; }
  double at(Rank r) const { return mass_.at(r - 1); }
  Count items() const noexcept { return mass_.size(); }

 private:
  std::vector<double> mass_;
};

// Sampled ranks r^u within a sample set of size n.
class SampledRankRecord {
 public:
  SampledRankRecord(std::vector<Rank> sampled_ranks, Count sample_size)
      : ranks_(std::move(sampled_ranks)), n_(sample_size) {
    if (ranks_.empty()) throw DomainError("sampled rank record is empty");
    for (std::size_t u = 0; u < ranks_.size(); ++u) {
      if (ranks_[u] < 1 || ranks_[u] > n_) {
        throw DomainError("sampled rank " + std::to_string(ranks_[u]) +
                          " of user #" + std::to_string(u + 1) +
                          " outside [1, " + std::to_string(n_) + "]");
      }
    }
  }

  std::span<const Rank> ranks() const noexcept { return ranks_; }
  Count users() const noexcept { return ranks_.size(); }
  Count sample_size() const noexcept { return n_; }

  // Z^u: 1 iff the user's sampled rank is within the cutoff.
  bool hit(std::size_t u, Count k) const { return ranks_.at(u) <= k; }

 private:
  std::vector<Rank> ranks_;
  Count n_;
};

// Non-decreasing curve over cutoffs 1..K_max with values in [0, 1].
// Values within 1e-12 outside [0, 1] (accumulated round-off) are clamped.
class HitRatioCurve {
 public:
  HitRatioCurve() = default;

  explicit HitRatioCurve(std::vector<double> values)
      : values_(std::move(values)) {
    constexpr double kSlack = 1e-12;
    if (values_.empty()) throw DomainError("hit-ratio curve is empty");
    double prev = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      double& v = values_[i];
      if (!(v >= -kSlack && v <= 1.0 + kSlack)) {
        throw DomainError("hit-ratio value outside [0, 1] at cutoff " +
                          std::to_string(i + 1));
      }
      v = std::clamp(v, 0.0, 1.0);
      if (v < prev - kSlack) {
        throw DomainError("hit-ratio curve decreases at cutoff " +
                          std::to_string(i + 1));
      }
      v = std::max(v, prev);
      prev = v;
    }
  }

  Count max_cutoff() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }

  // 1-based cutoff.
  double at(Count k) const {
    if (k < 1 || k > values_.size()) {
      throw DomainError("cutoff " + std::to_string(k) + " outside [1, " +
                        std::to_string(values_.size()) + "]");
    }
    return values_[k - 1];
  }

 private:
  std::vector<double> values_;
};

// W_R = (# users with R_u = R) / M.
inline RankHistogram histogram(const RankProfile& profile) {
  std::vector<double> counts(profile.items(), 0.0);
  for (Rank r : profile.ranks()) counts[r - 1] += 1.0;
  const double m = static_cast<double>(profile.users());
  for (double& c : counts) c /= m;
  return RankHistogram(std::move(counts));
}

}  // namespace sampled_hr

#endif  // SAMPLED_HR_CORE_HPP_
