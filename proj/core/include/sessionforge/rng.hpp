// Copyright 2026 The SessionForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SESSIONFORGE_RNG_HPP_
#define SESSIONFORGE_RNG_HPP_

#include <cstdint>
#include <optional>

namespace sessionforge {

// SplitMix64 with Box-Muller normals. The algorithm and constants are fixed
// so seeded output is the same on every platform:
//   state += 0x9E3779B97F4A7C15
//   z = (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   out = z ^ (z >> 31)
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  // Uniform in [0, 1) from the top 53 bits.
  double uniform();
  // Standard normal; pairs are generated together and the second is cached.
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Independent substream keyed by `stream`, for stable per-purpose draws.
  static SplitMix64 derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::uint64_t state_;
  std::optional<double> spare_;
};

}  // namespace sessionforge

#endif  // SESSIONFORGE_RNG_HPP_
