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

#include "ncfmm/simplex.h"

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "gtest/gtest.h"
#include "ncfmm/rng.h"

namespace ncfmm {
namespace {

using Sense = LinearProgram::Sense;

LinearProgram::Row DenseRow(const std::vector<double>& coefficients,
                            Sense sense, double rhs) {
  LinearProgram::Row row;
  for (int j = 0; j < static_cast<int>(coefficients.size()); ++j) {
    if (coefficients[j] != 0.0) row.terms.push_back({j, coefficients[j]});
  }
  row.sense = sense;
  row.rhs = rhs;
  return row;
}

// Solves a square system by Gaussian elimination with partial pivoting.
std::optional<std::vector<double>> SolveSquare(std::vector<std::vector<double>> a,
                                               std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int pivot = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[pivot][c])) pivot = r;
    }
    if (std::abs(a[pivot][c]) < 1e-12) return std::nullopt;
    std::swap(a[c], a[pivot]);
    std::swap(b[c], b[pivot]);
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (int i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

// Minimum over all basic feasible points: every choice of n active
// constraints among the rows and the bounds x >= 0. Bounded problems only.
std::optional<double> VertexOracle(const std::vector<std::vector<double>>& a,
                                   const std::vector<Sense>& senses,
                                   const std::vector<double>& b,
                                   const std::vector<double>& c) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(b.size());
  std::vector<std::vector<double>> planes = a;
  std::vector<double> rhs = b;
  for (int j = 0; j < n; ++j) {
    std::vector<double> unit(n, 0.0);
    unit[j] = 1.0;
    planes.push_back(unit);
    rhs.push_back(0.0);
  }
  const int total = m + n;
  std::optional<double> best;
  for (unsigned mask = 0; mask < (1u << total); ++mask) {
    // Any n independent tight constraints define a candidate vertex;
    // equalities are enforced by the feasibility check, since a dependent or
    // all-zero equality row need not be among them.
    if (__builtin_popcount(mask) != n) continue;
    std::vector<std::vector<double>> sys;
    std::vector<double> sys_rhs;
    for (int i = 0; i < total; ++i) {
      if (mask & (1u << i)) {
        sys.push_back(planes[i]);
        sys_rhs.push_back(rhs[i]);
      }
    }
    const auto x = SolveSquare(sys, sys_rhs);
    if (!x) continue;
    bool feasible = true;
    for (int j = 0; j < n; ++j) feasible = feasible && (*x)[j] >= -1e-9;
    for (int i = 0; i < m && feasible; ++i) {
      double lhs = 0.0;
      for (int j = 0; j < n; ++j) lhs += a[i][j] * (*x)[j];
      if (senses[i] == Sense::kLessEqual) feasible = lhs <= b[i] + 1e-9;
      if (senses[i] == Sense::kGreaterEqual) feasible = lhs >= b[i] - 1e-9;
      if (senses[i] == Sense::kEqual) feasible = std::abs(lhs - b[i]) <= 1e-9;
    }
    if (!feasible) continue;
    double value = 0.0;
    for (int j = 0; j < n; ++j) value += c[j] * (*x)[j];
    if (!best || value < *best) best = value;
  }
  return best;
}

TEST(SimplexTest, TextbookProblem) {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6).
  LinearProgram lp;
  lp.num_vars = 2;
  lp.objective = {-3.0, -5.0};
  lp.rows = {DenseRow({1, 0}, Sense::kLessEqual, 4),
             DenseRow({0, 2}, Sense::kLessEqual, 12),
             DenseRow({3, 2}, Sense::kLessEqual, 18)};
  const LpResult r = SolveLp(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, -36.0, 1e-12);
  EXPECT_NEAR(r.x[0], 2.0, 1e-12);
  EXPECT_NEAR(r.x[1], 6.0, 1e-12);
}

TEST(SimplexTest, BealeCyclingExampleTerminates) {
  LinearProgram lp;
  lp.num_vars = 4;
  lp.objective = {-0.75, 20.0, -0.5, 6.0};
  lp.rows = {DenseRow({0.25, -8, -1, 9}, Sense::kLessEqual, 0),
             DenseRow({0.5, -12, -0.5, 3}, Sense::kLessEqual, 0),
             DenseRow({0, 0, 1, 0}, Sense::kLessEqual, 1)};
  const LpResult r = SolveLp(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, -1.25, 1e-12);
}

TEST(SimplexTest, DetectsInfeasibleAndUnbounded) {
  LinearProgram infeasible;
  infeasible.num_vars = 1;
  infeasible.objective = {1.0};
  infeasible.rows = {DenseRow({1}, Sense::kGreaterEqual, 2),
                     DenseRow({1}, Sense::kLessEqual, 1)};
  EXPECT_EQ(SolveLp(infeasible).status, LpStatus::kInfeasible);

  LinearProgram unbounded;
  unbounded.num_vars = 2;
  unbounded.objective = {-1.0, 0.0};
  unbounded.rows = {DenseRow({1, -1}, Sense::kLessEqual, 1)};
  EXPECT_EQ(SolveLp(unbounded).status, LpStatus::kUnbounded);
}

TEST(SimplexTest, EqualityAndRedundantRows) {
  // Duplicate equality rows leave an artificial variable in the basis.
  LinearProgram lp;
  lp.num_vars = 3;
  lp.objective = {1.0, 2.0, 3.0};
  lp.rows = {DenseRow({1, 1, 1}, Sense::kEqual, 1),
             DenseRow({2, 2, 2}, Sense::kEqual, 2),
             DenseRow({1, 0, -1}, Sense::kEqual, 0)};
  const LpResult r = SolveLp(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  // x0 = x2, x0 + x1 + x2 = 1: best is x1 = 1 (cost 2) vs x0 = x2 = 0.5 (2).
  EXPECT_NEAR(r.objective, 2.0, 1e-12);
}

TEST(SimplexTest, MatchesVertexEnumerationOnRandomBoundedProblems) {
  Rng rng(61);
  int solved = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 2 + static_cast<int>(rng.Below(3));
    const int m = 1 + static_cast<int>(rng.Below(3));
    std::vector<std::vector<double>> a;
    std::vector<Sense> senses;
    std::vector<double> b;
    std::vector<double> c(n);
    for (double& v : c) v = rng.Uniform(-3.0, 3.0);
    for (int i = 0; i < m; ++i) {
      std::vector<double> row(n);
      for (double& v : row) v = std::round(rng.Uniform(-4.0, 4.0));
      a.push_back(row);
      const int kind = static_cast<int>(rng.Below(3));
      senses.push_back(kind == 0 ? Sense::kLessEqual
                                 : (kind == 1 ? Sense::kGreaterEqual
                                              : Sense::kEqual));
      b.push_back(std::round(rng.Uniform(-3.0, 6.0)));
    }
    // Box the feasible region so the optimum is attained at a vertex.
    for (int j = 0; j < n; ++j) {
      std::vector<double> row(n, 0.0);
      row[j] = 1.0;
      a.push_back(row);
      senses.push_back(Sense::kLessEqual);
      b.push_back(10.0);
    }
    LinearProgram lp;
    lp.num_vars = n;
    lp.objective = c;
    for (std::size_t i = 0; i < a.size(); ++i) {
      lp.rows.push_back(DenseRow(a[i], senses[i], b[i]));
    }
    const auto oracle = VertexOracle(a, senses, b, c);
    const LpResult r = SolveLp(lp);
    if (!oracle) {
      EXPECT_EQ(r.status, LpStatus::kInfeasible) << "trial " << trial;
      continue;
    }
    ASSERT_EQ(r.status, LpStatus::kOptimal) << "trial " << trial;
    EXPECT_NEAR(r.objective, *oracle, 1e-9) << "trial " << trial;
    const LpResult shuffled = SolveLp(lp, {.permutation_seed = trial});
    EXPECT_NEAR(shuffled.objective, *oracle, 1e-9);
    ++solved;
  }
  EXPECT_GT(solved, 100);
}

TEST(SimplexTest, KleeMintyCube) {
  // max sum 2^(n-j) x_j over the 3-d Klee-Minty cube: optimum 5^3 = 125.
  LinearProgram lp;
  lp.num_vars = 3;
  lp.objective = {-4.0, -2.0, -1.0};
  lp.rows = {DenseRow({1, 0, 0}, Sense::kLessEqual, 5),
             DenseRow({4, 1, 0}, Sense::kLessEqual, 25),
             DenseRow({8, 4, 1}, Sense::kLessEqual, 125)};
  const LpResult r = SolveLp(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, -125.0, 1e-10);
}

TEST(SimplexTest, StatusNames) {
  EXPECT_EQ(LpStatusName(LpStatus::kOptimal), "optimal");
  EXPECT_EQ(LpStatusName(LpStatus::kInfeasible), "infeasible");
}

}  // namespace
}  // namespace ncfmm
