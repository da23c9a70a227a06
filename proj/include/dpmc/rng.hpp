//
// Copyright 2026 The dpmc Authors
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
//

#ifndef DPMC_RNG_HPP_
#define DPMC_RNG_HPP_

#include <cstdint>

#include "dpmc/scalar_gauss.hpp"

namespace dpmc {

namespace detail {

// SplitMix64 finalizer (Steele, Lea & Flood's constants).
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

}  // namespace detail

// Counter-based seeded random source, algorithm id "splitmix64-counter".
//
// The stream is a pure function of (seed, stream, counter):
//
//   key      = mix64(seed + 0x9E3779B97F4A7C15 * stream)
//   output_i = mix64(key + 0x9E3779B97F4A7C15 * i),  i = 1, 2, ...
//
// with mix64 the SplitMix64 finalizer. Uniform doubles are
// ((output_i >> 11) + 0.5) * 2^-53, strictly inside (0, 1), and Gaussian
// draws apply std_normal_cdf_inv to one uniform each. Consumers draw
// matrices in row-major order. Any implementation of this recipe, in any
// language, reproduces the same streams bit for bit.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(detail::mix64(seed + kGamma * stream)), counter_(0) {}

  std::uint64_t next_u64() {
    counter_ += 1;
    return detail::mix64(key_ + kGamma * counter_);
  }

  // Uniform on the open interval (0, 1); never returns an endpoint, so the
  // inverse-CDF transform below is total.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_gaussian() {
    return std_normal_cdf_inv(Probability(next_uniform()));
  }

  // Independent derived stream; substreams with distinct ids never collide
  // with each other or with the parent in fewer than ~2^64 draws.
  CounterRng split(std::uint64_t substream) const {
    CounterRng child(0);
    child.key_ = detail::mix64(key_ ^ detail::mix64(kSplitSalt + substream));
    child.counter_ = 0;
    return child;
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kSplitSalt = 0xD1B54A32D192ED03ULL;

  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace dpmc

#endif  // DPMC_RNG_HPP_
