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

// Deterministic per-(seed, user, run) random streams.
//
// Each stream is an independent SplitMix64 sequence whose starting state is a
// mixed hash of the triple, so results do not depend on which thread draws
// which user or in what order.

#ifndef SAMPLED_HR_RNG_HPP_
#define SAMPLED_HR_RNG_HPP_

#include <cstdint>
#include <limits>

namespace sampled_hr {

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Satisfies std::uniform_random_bit_generator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return splitmix64_mix(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  // Uniform on the open interval (0, 1).
  constexpr double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

inline constexpr SplitMix64 make_stream(std::uint64_t seed, std::uint64_t user,
                                        std::uint64_t run) noexcept {
  std::uint64_t h = splitmix64_mix(seed ^ 0x6A09E667F3BCC909ULL);
  h = splitmix64_mix(h ^ (user + 0x9E3779B97F4A7C15ULL));
  h = splitmix64_mix(h ^ (run * 0xD1B54A32D192ED03ULL + 0x3C6EF372FE94F82BULL));
  return SplitMix64(h);
}

}  // namespace sampled_hr

#endif  // SAMPLED_HR_RNG_HPP_
