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

#ifndef NCFMM_SIMPLEX_H_
#define NCFMM_SIMPLEX_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace ncfmm {

// minimize c'x  subject to  rows,  x >= 0.
struct LinearProgram {
  enum class Sense { kLessEqual, kEqual, kGreaterEqual };

  struct Row {
    std::vector<std::pair<int, double>> terms;  // (variable, coefficient)
    Sense sense = Sense::kEqual;
    double rhs = 0.0;
  };

  int num_vars = 0;
  std::vector<double> objective;
  std::vector<Row> rows;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string_view LpStatusName(LpStatus status);

struct SimplexOptions {
  int max_iterations = 1'000'000;
  // Reduced-cost and feasibility tolerance.
  double tolerance = 1e-10;
  // Solve with the structural columns shuffled by this seed. A different
  // column order sends the simplex down a different pivot path; the optimal
  // value must not change.
  std::optional<std::uint64_t> permutation_seed;
};

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
  int iterations = 0;
};

// Dense two-phase tableau simplex: Dantzig pricing, switching to Bland's
// rule during degenerate stretches. The final basic solution is recomputed
// from the original constraint matrix with an LU solve, which removes the
// round-off accumulated over the pivots.
LpResult SolveLp(const LinearProgram& program,
                 const SimplexOptions& options = {});

}  // namespace ncfmm

#endif  // NCFMM_SIMPLEX_H_
