// Copyright 2026 The rsmkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RSM_RANDOM_HPP_
#define RSM_RANDOM_HPP_

#include <cstddef>
#include <cstdint>

namespace rsm {

// SplitMix64 generator. Cheap to construct, so independent substreams are
// made by seeding a fresh generator with `substream_seed(master, index)`.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  // Uniform double in [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, n).
  std::size_t index(std::size_t n);
  // Standard normal deviate via Box-Muller; the paired deviate is cached.
  double normal();

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Seed of substream `index` derived from `master`: the counter is added to the
// master seed and the sum is scrambled by one SplitMix64 finalizer round.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index);

}  // namespace rsm

#endif  // RSM_RANDOM_HPP_
