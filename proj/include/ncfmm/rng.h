//
// Copyright 2026 The noisy-cfmm Authors
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

#ifndef NCFMM_RNG_H_
#define NCFMM_RNG_H_

#include <array>
#include <cstdint>
#include <limits>

namespace ncfmm {

// xoshiro256** seeded through SplitMix64. Streams are addressed by
// (seed, stream index) so that replica i of an experiment always sees the
// same draws no matter which worker runs it or in which order.
//
// Only integer arithmetic is used to produce doubles, which keeps sampled
// paths bit-identical across standard library implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  // Independent substream `stream` of the generator family `seed`.
  static Rng ForStream(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return Next(); }
  std::uint64_t Next();

  // Uniform on [0, 1) with 53 random bits.
  double Uniform01();
  // Uniform on [lo, hi).
  double Uniform(double lo, double hi);
  // Standard normal via Box-Muller; consumes two uniforms per call.
  double Normal();
  // Uniform integer in [0, n).
  std::uint64_t Below(std::uint64_t n);

 private:
  std::array<std::uint64_t, 4> s_;
};

std::uint64_t SplitMix64(std::uint64_t& state);

}  // namespace ncfmm

#endif  // NCFMM_RNG_H_
