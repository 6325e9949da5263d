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

#include "ncfmm/privacy.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include "ncfmm/errors.h"

namespace ncfmm {
namespace {

std::string Describe(double value) {
  std::ostringstream os;
  os.precision(17);
  os << value;
  return os.str();
}

}  // namespace

bool PrivacySpec::IsNonPrivate() const {
  return lower == upper || std::isinf(epsilon);
}

void PrivacySpec::Validate() const {
  if (!std::isfinite(lower) || !std::isfinite(upper) || lower > upper) {
    throw Error(ErrorCode::kSpecViolation,
                "masking interval needs finite lower <= upper");
  }
  if (std::isnan(epsilon) || epsilon < 0.0) {
    throw Error(ErrorCode::kSpecViolation, "epsilon must be non-negative");
  }
}

NoiseDistribution::NoiseDistribution(std::vector<NoiseAtom> atoms)
    : atoms_(std::move(atoms)) {
  if (atoms_.empty()) {
    throw Error(ErrorCode::kInvalidDistribution, "no atoms");
  }
  double total = 0.0;
  for (const NoiseAtom& atom : atoms_) {
    if (!std::isfinite(atom.eta)) {
      throw Error(ErrorCode::kInvalidDistribution, "non-finite noise value");
    }
    if (!(atom.probability >= 0.0 && atom.probability <= 1.0)) {
      throw Error(ErrorCode::kInvalidDistribution,
                  "probability " + Describe(atom.probability) +
                      " outside [0, 1]");
    }
    total += atom.probability;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::kInvalidDistribution,
                "probabilities sum to " + Describe(total));
  }
}

NoiseDistribution NoiseDistribution::Zero() {
  return NoiseDistribution({{0.0, 1.0}});
}

double NoiseDistribution::Mean() const {
  double mean = 0.0;
  for (const NoiseAtom& atom : atoms_) mean += atom.probability * atom.eta;
  return mean;
}

double NoiseDistribution::MinEta() const {
  double lo = atoms_.front().eta;
  for (const NoiseAtom& atom : atoms_) lo = std::min(lo, atom.eta);
  return lo;
}

double NoiseDistribution::MaxEta() const {
  double hi = atoms_.front().eta;
  for (const NoiseAtom& atom : atoms_) hi = std::max(hi, atom.eta);
  return hi;
}

bool NoiseDistribution::IsZero() const {
  return std::all_of(atoms_.begin(), atoms_.end(), [](const NoiseAtom& atom) {
    return atom.eta == 0.0 || atom.probability == 0.0;
  });
}

double NoiseDistribution::Sample(Rng& rng) const {
  const double u = rng.Uniform01();
  double cumulative = 0.0;
  for (const NoiseAtom& atom : atoms_) {
    cumulative += atom.probability;
    if (u < cumulative) return atom.eta;
  }
  // u landed in the rounding gap above the last cumulative sum.
  for (auto it = atoms_.rbegin(); it != atoms_.rend(); ++it) {
    if (it->probability > 0.0) return it->eta;
  }
  return atoms_.back().eta;
}

double BinaryHalfWidth(const PrivacySpec& spec) {
  // (e^eps + 1) / (e^eps - 1) = coth(eps / 2)
  return 0.5 * (spec.upper - spec.lower) / std::tanh(0.5 * spec.epsilon);
}

NoiseDistribution BinaryMechanism(double delta, const PrivacySpec& spec) {
  spec.Validate();
  if (!spec.Contains(delta)) {
    throw Error(ErrorCode::kSpecViolation,
                "trade " + Describe(delta) + " outside masking interval [" +
                    Describe(spec.lower) + ", " + Describe(spec.upper) + "]");
  }
  if (spec.IsNonPrivate()) return NoiseDistribution::Zero();
  if (spec.epsilon < kMinEpsilon) {
    throw Error(ErrorCode::kSpecViolation,
                "epsilon " + Describe(spec.epsilon) + " below floor " +
                    Describe(kMinEpsilon));
  }
  const double mid = 0.5 * (spec.upper + spec.lower);
  const double half_width = BinaryHalfWidth(spec);
  // P(high) = ((delta - l) e^eps + (u - delta)) / ((u - l)(e^eps + 1)), written
  // with t = e^-eps and distances to the endpoints so it stays accurate for
  // narrow intervals far from zero and for large epsilon.
  const double t = std::exp(-spec.epsilon);
  const double above = delta - spec.lower;
  const double below = spec.upper - delta;
  const double scale = (spec.upper - spec.lower) * (1.0 + t);
  return NoiseDistribution({
      {mid - delta - half_width, (below + above * t) / scale},
      {mid - delta + half_width, (above + below * t) / scale},
  });
}

NoiseDistribution BiasedBinary(double delta, const PrivacySpec& spec,
                               double bias) {
  const NoiseDistribution base = BinaryMechanism(delta, spec);
  if (base.size() == 1) {
    if (bias != 0.0) {
      throw Error(ErrorCode::kInfeasibleBias,
                  "a zero-noise trade cannot carry mean " + Describe(bias));
    }
    return base;
  }
  const double low = base.atoms()[0].eta;
  const double high = base.atoms()[1].eta;
  // p_high * high + (1 - p_high) * low = bias
  const double p_high = (bias - low) / (high - low);
  if (!(p_high >= 0.0 && p_high <= 1.0)) {
    throw Error(ErrorCode::kInfeasibleBias,
                "mean " + Describe(bias) + " outside support [" +
                    Describe(low) + ", " + Describe(high) + "]");
  }
  return NoiseDistribution({{low, 1.0 - p_high}, {high, p_high}});
}

PldpReport VerifyPldp(const Mechanism& mechanism, const PrivacySpec& spec,
                      int grid_size) {
  spec.Validate();
  if (grid_size < 1) {
    throw Error(ErrorCode::kSpecViolation, "grid size must be positive");
  }
  std::vector<double> inputs;
  if (spec.lower == spec.upper || grid_size == 1) {
    inputs.push_back(spec.lower);
  } else {
    inputs.reserve(grid_size);
    const double width = spec.upper - spec.lower;
    for (int i = 0; i < grid_size - 1; ++i) {
      inputs.push_back(spec.lower + width * i / (grid_size - 1));
    }
    inputs.push_back(spec.upper);
  }
  return VerifyPldpOnInputs(mechanism, inputs, spec.epsilon);
}

PldpReport VerifyPldpOnInputs(const Mechanism& mechanism,
                              std::span<const double> inputs, double epsilon) {
  struct Observation {
    double output;
    double probability;
    std::size_t input;
  };
  std::vector<Observation> observations;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const NoiseDistribution dist = mechanism(inputs[i]);
    for (const NoiseAtom& atom : dist.atoms()) {
      observations.push_back({inputs[i] + atom.eta, atom.probability, i});
    }
  }
  std::sort(observations.begin(), observations.end(),
            [](const Observation& a, const Observation& b) {
              return a.output < b.output;
            });

  // Group outputs that agree within the tolerance. A group wider than the
  // tolerance means chained near-matches that cannot be aligned uniquely.
  std::vector<std::vector<double>> mass;  // mass[group][input]
  double group_start = 0.0;
  for (std::size_t k = 0; k < observations.size(); ++k) {
    const Observation& obs = observations[k];
    const bool new_group =
        k == 0 ||
        obs.output - observations[k - 1].output > kOutputMatchTolerance;
    if (new_group) {
      mass.emplace_back(inputs.size(), 0.0);
      group_start = obs.output;
    } else if (obs.output - group_start > kOutputMatchTolerance) {
      throw Error(ErrorCode::kMisalignedSupport,
                  "outputs near " + Describe(group_start) +
                      " cannot be aligned across inputs");
    }
    mass.back()[obs.input] += obs.probability;
  }

  PldpReport report;
  report.inputs = static_cast<int>(inputs.size());
  report.outputs = static_cast<int>(mass.size());
  for (const auto& column : mass) {
    const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
    double ratio = 1.0;
    if (*hi > 0.0) {
      ratio = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
    }
    report.max_ratio = std::max(report.max_ratio, ratio);
  }
  report.satisfied = std::isinf(epsilon) ||
                     report.max_ratio <= std::exp(epsilon) * (1.0 + 1e-9);
  return report;
}

}  // namespace ncfmm
