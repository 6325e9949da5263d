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

#include "ncfmm/lp_noise.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ncfmm/errors.h"
#include "ncfmm/fee.h"

namespace ncfmm {
namespace {

// Two grid values closer than this are the same point.
constexpr double kGridMergeTolerance = 1e-12;
// Filler points closer than this fraction of the span to an existing point
// are skipped; near-duplicate columns only worsen the LP conditioning.
constexpr double kFillSpacing = 1e-3;

void InsertUnique(std::vector<double>& grid, double value,
                  double tolerance = kGridMergeTolerance) {
  for (double existing : grid) {
    if (std::fabs(existing - value) <= tolerance) return;
  }
  grid.push_back(value);
}

}  // namespace

std::vector<double> UniformGrid(double lower, double upper, int size) {
  if (size < 1 || lower > upper) {
    throw Error(ErrorCode::kShape, "grid needs size >= 1 and lower <= upper");
  }
  if (size == 1 || lower == upper) return {lower};
  std::vector<double> grid;
  grid.reserve(size);
  for (int i = 0; i < size - 1; ++i) {
    grid.push_back(lower + (upper - lower) * i / (size - 1));
  }
  grid.push_back(upper);
  return grid;
}

std::vector<double> LandmarkOutputGrid(const std::vector<double>& inputs,
                                       const PrivacySpec& spec, int size) {
  std::vector<double> grid;
  for (double v : inputs) InsertUnique(grid, v);
  const double mid = 0.5 * (spec.lower + spec.upper);
  const double half_width = BinaryHalfWidth(spec);
  const double low = mid - half_width;
  const double high = mid + half_width;
  InsertUnique(grid, low);
  InsertUnique(grid, high);
  if (static_cast<int>(grid.size()) > size) {
    throw Error(ErrorCode::kShape, "output grid too small for inputs and landmarks");
  }
  // Fill with the points of ever finer uniform grids until the requested
  // size is reached. The span reaches at least a quarter width past the
  // support: for large epsilon the landmarks collapse onto it, and zero mean
  // at the endpoints then needs outputs strictly outside.
  const double margin = 0.25 * (spec.upper - spec.lower);
  const double fill_low = std::min(low, spec.lower - margin);
  const double fill_high = std::max(high, spec.upper + margin);
  const double spacing = kFillSpacing * (fill_high - fill_low);
  for (int level = 2; static_cast<int>(grid.size()) < size; ++level) {
    for (double value : UniformGrid(fill_low, fill_high, level)) {
      if (static_cast<int>(grid.size()) >= size) break;
      InsertUnique(grid, value, spacing);
    }
  }
  std::sort(grid.begin(), grid.end());
  return grid;
}

LpNoiseSolution OptimizeNoiseLp(const LpNoiseProblem& problem,
                                const SimplexOptions& options) {
  const auto& inputs = problem.inputs;
  const auto& outputs = problem.outputs;
  const int m = static_cast<int>(inputs.size());
  const int n = static_cast<int>(outputs.size());
  if (m == 0 || n == 0) {
    throw Error(ErrorCode::kShape, "input and output grids must be non-empty");
  }
  if (!(problem.epsilon >= kMinEpsilon) || !std::isfinite(problem.epsilon)) {
    throw Error(ErrorCode::kSpecViolation,
                "epsilon must be finite and at least the floor");
  }
  std::vector<double> weights = problem.input_weights;
  if (weights.empty()) weights.assign(m, 1.0 / m);
  if (static_cast<int>(weights.size()) != m) {
    throw Error(ErrorCode::kShape, "one weight per input required");
  }

  LpNoiseSolution solution;
  for (double v : inputs) {
    const bool below = std::any_of(outputs.begin(), outputs.end(),
                                   [v](double o) { return o <= v; });
    const bool above = std::any_of(outputs.begin(), outputs.end(),
                                   [v](double o) { return o >= v; });
    if (!below || !above) {
      solution.status = LpStatus::kInfeasible;
      solution.infeasible_constraint = "zero_mean";
      return solution;
    }
  }

  // fee[v][o]: value of reversing noise o - v after trade v.
  std::vector<double> fee(static_cast<std::size_t>(m) * n);
  for (int v = 0; v < m; ++v) {
    const double post_trade = problem.reference_x + inputs[v];
    for (int o = 0; o < n; ++o) {
      fee[v * n + o] =
          problem.curve.ReversalValue(post_trade, outputs[o] - inputs[v]);
    }
  }

  // q[v][o] = floor[o] + excess[v][o] with
  //   0 <= excess[v][o] <= (e^eps - 1) floor[o].
  // Every q[.][o] then lies in [floor[o], e^eps floor[o]], which is exactly
  // the pairwise ratio bound, with n + m n variables and m n inequalities
  // instead of m^2 n. The floor is stored as h[o] = floor[o] * root with
  // root = sqrt(e^eps - 1), which splits the factor evenly between the
  // equality rows and the inequalities; for large epsilon either extreme
  // alone leaves the tableau badly conditioned.
  //
  // Layout: excess[v][o] at v * n + o, then h[o] at m * n + o.
  const double spread = std::expm1(problem.epsilon);
  const double root = std::sqrt(spread);
  const int excess_count = m * n;
  LinearProgram lp;
  lp.num_vars = excess_count + n;
  lp.objective.assign(lp.num_vars, 0.0);
  for (int v = 0; v < m; ++v) {
    for (int o = 0; o < n; ++o) {
      const double c = weights[v] * fee[v * n + o];
      lp.objective[v * n + o] += c;
      lp.objective[excess_count + o] += c / root;
    }
  }
  for (int v = 0; v < m; ++v) {
    LinearProgram::Row total;
    LinearProgram::Row mean;
    total.rhs = 1.0;
    mean.rhs = 0.0;
    for (int o = 0; o < n; ++o) {
      const double eta = outputs[o] - inputs[v];
      total.terms.emplace_back(v * n + o, 1.0);
      total.terms.emplace_back(excess_count + o, 1.0 / root);
      if (eta != 0.0) {
        mean.terms.emplace_back(v * n + o, eta);
        mean.terms.emplace_back(excess_count + o, eta / root);
      }
    }
    lp.rows.push_back(std::move(total));
    lp.rows.push_back(std::move(mean));
  }
  for (int v = 0; v < m; ++v) {
    for (int o = 0; o < n; ++o) {
      LinearProgram::Row cap;
      cap.sense = LinearProgram::Sense::kLessEqual;
      cap.terms = {{v * n + o, 1.0}, {excess_count + o, -root}};
      lp.rows.push_back(std::move(cap));
    }
  }

  const LpResult result = SolveLp(lp, options);
  solution.status = result.status;
  solution.iterations = result.iterations;
  if (result.status != LpStatus::kOptimal) {
    if (result.status == LpStatus::kInfeasible) {
      solution.infeasible_constraint = "stochastic_pldp";
    }
    return solution;
  }

  std::vector<double> floors(n);
  for (int o = 0; o < n; ++o) {
    floors[o] = std::max(0.0, result.x[excess_count + o]) / root;
  }
  std::vector<std::vector<double>> q(m, std::vector<double>(n));
  for (int v = 0; v < m; ++v) {
    double total = 0.0;
    for (int o = 0; o < n; ++o) {
      const double cap = spread * floors[o];
      const double excess = std::clamp(result.x[v * n + o], 0.0, cap);
      q[v][o] = floors[o] + excess;
      total += q[v][o];
    }
    for (double& value : q[v]) value /= total;
  }

  solution.objective = 0.0;
  for (int v = 0; v < m; ++v) {
    std::vector<NoiseAtom> atoms;
    double mass = 0.0;
    double mean = 0.0;
    double cost = 0.0;
    for (int o = 0; o < n; ++o) {
      mass += q[v][o];
      mean += q[v][o] * (outputs[o] - inputs[v]);
      cost += q[v][o] * fee[v * n + o];
      if (q[v][o] > 0.0) atoms.push_back({outputs[o] - inputs[v], q[v][o]});
    }
    solution.max_row_sum_error =
        std::max(solution.max_row_sum_error, std::fabs(mass - 1.0));
    solution.max_abs_mean = std::max(solution.max_abs_mean, std::fabs(mean));
    solution.distributions.emplace_back(std::move(atoms));
    solution.fees.push_back(cost);
    solution.objective += weights[v] * cost;
  }
  for (int o = 0; o < n; ++o) {
    double lo = q[0][o];
    double hi = q[0][o];
    for (int v = 1; v < m; ++v) {
      lo = std::min(lo, q[v][o]);
      hi = std::max(hi, q[v][o]);
    }
    if (hi > 0.0) {
      solution.max_ratio = std::max(
          solution.max_ratio,
          lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity());
    }
  }
  return solution;
}

}  // namespace ncfmm
