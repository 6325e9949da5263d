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

#ifndef NCFMM_LP_NOISE_H_
#define NCFMM_LP_NOISE_H_

#include <string>
#include <vector>

#include "ncfmm/curve.h"
#include "ncfmm/privacy.h"
#include "ncfmm/simplex.h"

namespace ncfmm {

// Search for the cheapest PLDP noise on a fixed grid.
//
// For every input trade v (inputs) the mechanism picks a noised position o
// from the shared output grid, i.e. noise eta = o - v, with probability
// q[v][o]. Constraints, all linear in q:
//   * sum_o q[v][o] = 1                       for every v
//   * sum_o (o - v) q[v][o] = 0               for every v (zero mean)
//   * q[v][o] <= e^eps q[v'][o]               for every o, v, v'
// Objective: sum_v w_v * NoiseFee(curve, reference_x, v, q[v]).
//
// Variables are laid out inputs-major, outputs-minor: q[v][o] has index
// v * outputs.size() + o.
struct LpNoiseProblem {
  TradingCurve curve = TradingCurve::ConstantProduct(1.0);
  double reference_x = 1.0;
  std::vector<double> inputs;
  std::vector<double> outputs;
  double epsilon = 1.0;
  // Empty means uniform weights 1 / inputs.size().
  std::vector<double> input_weights;
};

struct LpNoiseSolution {
  LpStatus status = LpStatus::kInfeasible;
  // For infeasible problems, the constraint class that cannot be met:
  // "zero_mean" when some input has outputs on one side only, otherwise
  // "stochastic_pldp".
  std::string infeasible_constraint;
  // One distribution of eta per input (atoms with positive mass only).
  std::vector<NoiseDistribution> distributions;
  std::vector<double> fees;
  double objective = 0.0;
  int iterations = 0;
  // Largest violations of the constraints by the returned distributions.
  double max_row_sum_error = 0.0;
  double max_abs_mean = 0.0;
  double max_ratio = 1.0;
};

// Uniform grid of `size` points over [lower, upper]; a single point when
// size == 1 or lower == upper.
std::vector<double> UniformGrid(double lower, double upper, int size);

// Output grid of `size` points holding every input, both binary-mechanism
// landmarks for `spec`, and evenly spread filler points between the
// landmarks. Throws kShape if `size` is too small to hold the required
// points.
std::vector<double> LandmarkOutputGrid(const std::vector<double>& inputs,
                                       const PrivacySpec& spec, int size);

LpNoiseSolution OptimizeNoiseLp(const LpNoiseProblem& problem,
                                const SimplexOptions& options = {});

}  // namespace ncfmm

#endif  // NCFMM_LP_NOISE_H_
