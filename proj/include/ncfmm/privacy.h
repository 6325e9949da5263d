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

#ifndef NCFMM_PRIVACY_H_
#define NCFMM_PRIVACY_H_

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "ncfmm/rng.h"

namespace ncfmm {

// Smallest finite epsilon accepted for a non-degenerate masking interval.
// Below it the binary mechanism's noise grows without bound.
inline constexpr double kMinEpsilon = 1e-6;

// Personalized privacy request: hide the trade among all sizes in
// [lower, upper] (units of X) at privacy level epsilon.
struct PrivacySpec {
  double lower = 0.0;
  double upper = 0.0;
  double epsilon = std::numeric_limits<double>::infinity();

  // The spec a trader without privacy needs sends: tau = {delta}, eps = inf.
  static PrivacySpec NonPrivate(double delta) {
    return {delta, delta, std::numeric_limits<double>::infinity()};
  }

  bool IsNonPrivate() const;
  bool Contains(double delta) const {
    return delta >= lower && delta <= upper;
  }
  // Throws kSpecViolation unless lower <= upper and epsilon >= 0.
  void Validate() const;

  friend bool operator==(const PrivacySpec&, const PrivacySpec&) = default;
};

struct NoiseAtom {
  double eta = 0.0;
  double probability = 0.0;

  friend bool operator==(const NoiseAtom&, const NoiseAtom&) = default;
};

// Finite-support distribution of noise trades (units of X).
class NoiseDistribution {
 public:
  // Validates: non-empty, finite values, probabilities in [0, 1] summing to
  // one within 1e-12.
  explicit NoiseDistribution(std::vector<NoiseAtom> atoms);

  // The point mass at zero used for non-private trades.
  static NoiseDistribution Zero();

  std::span<const NoiseAtom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  // Sum of p_i * eta_i in atom order.
  double Mean() const;
  double MinEta() const;
  double MaxEta() const;
  // True iff every atom with positive probability sits at zero.
  bool IsZero() const;

  // Inverse-CDF draw; consumes exactly one uniform from `rng`.
  double Sample(Rng& rng) const;

  friend bool operator==(const NoiseDistribution&,
                         const NoiseDistribution&) = default;

 private:
  std::vector<NoiseAtom> atoms_;
};

// ((u - l) / 2) * (e^eps + 1) / (e^eps - 1): distance from the interval
// midpoint to either output landmark of the binary mechanism.
double BinaryHalfWidth(const PrivacySpec& spec);

// Two-point PLDP mechanism. The noised position delta + eta lands on one of
// the input-independent landmarks (u + l) / 2 -/+ BinaryHalfWidth(spec),
// with the upper landmark more likely the larger delta is. Zero-mean.
// Non-private specs yield NoiseDistribution::Zero().
NoiseDistribution BinaryMechanism(double delta, const PrivacySpec& spec);

// Binary mechanism atoms reweighted so that the mean is `bias`. Test fixture
// for non-zero-mean noise; makes no privacy claim.
NoiseDistribution BiasedBinary(double delta, const PrivacySpec& spec,
                               double bias);

// Maps a trade size to the noise it receives.
using Mechanism = std::function<NoiseDistribution(double input)>;

struct PldpReport {
  double max_ratio = 1.0;
  bool satisfied = true;
  int inputs = 0;
  int outputs = 0;
};

// Absolute tolerance used to identify observable outputs across inputs.
inline constexpr double kOutputMatchTolerance = 1e-9;

// Checks Pr[o | v] <= e^eps Pr[o | v'] over a uniform grid of `grid_size`
// inputs spanning the masking interval (both endpoints included). The
// observable for input v is the noised position v + eta.
PldpReport VerifyPldp(const Mechanism& mechanism, const PrivacySpec& spec,
                      int grid_size);

// Same check on an explicit list of inputs.
PldpReport VerifyPldpOnInputs(const Mechanism& mechanism,
                              std::span<const double> inputs, double epsilon);

}  // namespace ncfmm

#endif  // NCFMM_PRIVACY_H_
