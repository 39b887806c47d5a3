/*
 * Copyright 2026 The aitd Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef AITD_RNG_HPP_
#define AITD_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <span>

namespace aitd {

// splitmix64 step; also used to derive independent seeds.
std::uint64_t splitmix64(std::uint64_t& state);

// Independent random streams derived from one user seed. Each consumer draws
// from its own stream so adding draws in one place never shifts another.
enum class RngStream : std::uint64_t {
  kInit = 1,
  kShuffle = 2,
  kDropout = 3,
  kFolds = 4,
  kTopicTies = 5,
};

// xoshiro256** seeded through splitmix64. Distributions are implemented here
// (not via <random>) so draws are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t seed, RngStream stream);

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 bits of precision.
  double uniform();
  double uniform(double lo, double hi);
  // Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);
  // Standard normal via Box-Muller.
  double normal(double mean, double stddev);

  template <typename T>
  void shuffle(std::span<T> items) {
    // Fisher-Yates, back to front.
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace aitd

#endif  // AITD_RNG_HPP_
