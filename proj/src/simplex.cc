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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "ncfmm/errors.h"
#include "ncfmm/rng.h"

namespace ncfmm {
namespace {

constexpr double kPivotTolerance = 1e-11;
constexpr double kRelativePivot = 1e-9;
constexpr double kFeasibilityTolerance = 1e-9;
constexpr int kDegenerateStreakForBland = 50;
constexpr int kScalingPasses = 8;
// Rebuild the tableau from the original rows this often to stop rounding
// drift from accumulating across pivots.
constexpr int kReinvertInterval = 256;

// Geometric-mean equilibration: alternately scale rows and columns so the
// largest and smallest magnitude in each multiply to one. Returns the row and
// column factors; the scaled entry is row[i] * a(i, j) * col[j].
std::pair<std::vector<double>, std::vector<double>> Equilibrate(
    const LinearProgram& program) {
  const int rows = static_cast<int>(program.rows.size());
  std::vector<double> row_scale(rows, 1.0);
  std::vector<double> col_scale(program.num_vars, 1.0);
  for (int pass = 0; pass < kScalingPasses; ++pass) {
    for (int r = 0; r < rows; ++r) {
      double lo = INFINITY;
      double hi = 0.0;
      for (const auto& [var, coefficient] : program.rows[r].terms) {
        if (var < 0 || var >= program.num_vars) continue;
        const double a = std::fabs(coefficient) * col_scale[var];
        if (a == 0.0) continue;
        lo = std::min(lo, a);
        hi = std::max(hi, a);
      }
      if (hi > 0.0) row_scale[r] = 1.0 / std::sqrt(lo * hi);
    }
    std::vector<double> lo(program.num_vars, INFINITY);
    std::vector<double> hi(program.num_vars, 0.0);
    for (int r = 0; r < rows; ++r) {
      for (const auto& [var, coefficient] : program.rows[r].terms) {
        if (var < 0 || var >= program.num_vars) continue;
        const double a = std::fabs(coefficient) * row_scale[r];
        if (a == 0.0) continue;
        lo[var] = std::min(lo[var], a);
        hi[var] = std::max(hi[var], a);
      }
    }
    for (int j = 0; j < program.num_vars; ++j) {
      if (hi[j] > 0.0) col_scale[j] = 1.0 / std::sqrt(lo[j] * hi[j]);
    }
  }
  return {row_scale, col_scale};
}

class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * (cols + 1), 0.0) {}

  double& at(int r, int c) { return data_[Index(r, c)]; }
  double at(int r, int c) const { return data_[Index(r, c)]; }
  double& rhs(int r) { return at(r, cols_); }
  double* row(int r) { return &data_[Index(r, 0)]; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

 private:
  std::size_t Index(int r, int c) const {
    return static_cast<std::size_t>(r) * (cols_ + 1) + c;
  }

  int rows_;
  int cols_;
  std::vector<double> data_;
};

class Solver {
 public:
  Solver(const LinearProgram& program, const SimplexOptions& options)
      : options_(options) {
    Build(program);
  }

  LpResult Solve() {
    LpResult result;
    // Phase 1: drive the artificials to zero.
    std::vector<double> phase1(total_cols_, 0.0);
    for (int j = artificial_begin_; j < total_cols_; ++j) phase1[j] = 1.0;
    SetCosts(phase1);
    LpStatus status = Iterate(/*allow_artificial=*/true);
    result.iterations = iterations_;
    if (status == LpStatus::kIterationLimit) {
      result.status = status;
      return result;
    }
    double infeasibility = 0.0;
    for (int r = 0; r < tableau_.rows(); ++r) {
      if (active_[r] && basis_[r] >= artificial_begin_) {
        infeasibility += tableau_.rhs(r);
      }
    }
    if (infeasibility > 1e-9 * rhs_scale_) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    DriveOutArtificials();

    // Phase 2.
    std::vector<double> phase2(total_cols_, 0.0);
    std::copy(scaled_cost_.begin(), scaled_cost_.end(), phase2.begin());
    SetCosts(phase2);
    status = Iterate(/*allow_artificial=*/false);
    result.iterations = iterations_;
    if (status != LpStatus::kOptimal) {
      result.status = status;
      return result;
    }

    std::vector<double> values(total_cols_, 0.0);
    for (int r = 0; r < tableau_.rows(); ++r) {
      if (active_[r]) values[basis_[r]] = std::max(0.0, tableau_.rhs(r));
    }
    Refine(values);

    result.status = LpStatus::kOptimal;
    result.x.assign(num_structural_, 0.0);
    for (int j = 0; j < num_structural_; ++j) {
      values[j] *= column_scale_[j];
      result.x[column_to_var_[j]] = values[j];
    }
    result.objective = 0.0;
    for (int j = 0; j < num_structural_; ++j) {
      result.objective += cost_[j] * values[j];
    }
    return result;
  }

 private:
  void Build(const LinearProgram& program) {
    num_structural_ = program.num_vars;
    if (static_cast<int>(program.objective.size()) != num_structural_) {
      throw Error(ErrorCode::kShape, "objective length != num_vars");
    }
    column_to_var_.resize(num_structural_);
    std::iota(column_to_var_.begin(), column_to_var_.end(), 0);
    if (options_.permutation_seed.has_value()) {
      Rng rng(*options_.permutation_seed);
      for (int i = num_structural_ - 1; i > 0; --i) {
        const auto j = static_cast<int>(rng.Below(static_cast<std::uint64_t>(i) + 1));
        std::swap(column_to_var_[i], column_to_var_[j]);
      }
    }
    std::vector<int> var_to_column(num_structural_);
    for (int j = 0; j < num_structural_; ++j) var_to_column[column_to_var_[j]] = j;
    const auto [row_scale, var_scale] = Equilibrate(program);
    column_scale_.assign(num_structural_, 1.0);
    for (int v = 0; v < num_structural_; ++v) {
      column_scale_[var_to_column[v]] = var_scale[v];
    }

    const int rows = static_cast<int>(program.rows.size());
    std::vector<double> sign(rows, 1.0);
    std::vector<LinearProgram::Sense> sense(rows);
    int slacks = 0;
    int artificials = 0;
    for (int r = 0; r < rows; ++r) {
      const auto& row = program.rows[r];
      sense[r] = row.sense;
      if (row.rhs < 0.0) {
        sign[r] = -1.0;
        if (row.sense == LinearProgram::Sense::kLessEqual) {
          sense[r] = LinearProgram::Sense::kGreaterEqual;
        } else if (row.sense == LinearProgram::Sense::kGreaterEqual) {
          sense[r] = LinearProgram::Sense::kLessEqual;
        }
      }
      if (sense[r] != LinearProgram::Sense::kEqual) ++slacks;
      if (sense[r] != LinearProgram::Sense::kLessEqual) ++artificials;
    }
    artificial_begin_ = num_structural_ + slacks;
    total_cols_ = artificial_begin_ + artificials;
    tableau_ = Tableau(rows, total_cols_);
    original_ = Eigen::MatrixXd::Zero(rows, total_cols_);
    original_rhs_ = Eigen::VectorXd::Zero(rows);
    basis_.assign(rows, -1);
    active_.assign(rows, true);
    cost_.assign(num_structural_, 0.0);
    scaled_cost_.assign(num_structural_, 0.0);
    double cost_norm = 0.0;
    for (int v = 0; v < num_structural_; ++v) {
      const int j = var_to_column[v];
      cost_[j] = program.objective[v];
      scaled_cost_[j] = program.objective[v] * column_scale_[j];
      cost_norm = std::max(cost_norm, std::fabs(scaled_cost_[j]));
    }
    // Normalize so the reduced-cost tolerance is relative to the objective.
    if (cost_norm > 0.0) {
      for (double& c : scaled_cost_) c /= cost_norm;
    }

    int next_slack = num_structural_;
    int next_artificial = artificial_begin_;
    rhs_scale_ = 1.0;
    for (int r = 0; r < rows; ++r) {
      const auto& row = program.rows[r];
      const double factor = sign[r] * row_scale[r];
      for (const auto& [var, coefficient] : row.terms) {
        if (var < 0 || var >= num_structural_) {
          throw Error(ErrorCode::kShape, "row references unknown variable");
        }
        const double scaled = factor * coefficient * var_scale[var];
        tableau_.at(r, var_to_column[var]) += scaled;
        original_(r, var_to_column[var]) += scaled;
      }
      tableau_.rhs(r) = factor * row.rhs;
      original_rhs_(r) = factor * row.rhs;
      rhs_scale_ = std::max(rhs_scale_, std::fabs(factor * row.rhs));
      switch (sense[r]) {
        case LinearProgram::Sense::kLessEqual:
          tableau_.at(r, next_slack) = 1.0;
          original_(r, next_slack) = 1.0;
          basis_[r] = next_slack++;
          break;
        case LinearProgram::Sense::kGreaterEqual:
          tableau_.at(r, next_slack) = -1.0;
          original_(r, next_slack) = -1.0;
          ++next_slack;
          tableau_.at(r, next_artificial) = 1.0;
          original_(r, next_artificial) = 1.0;
          basis_[r] = next_artificial++;
          break;
        case LinearProgram::Sense::kEqual:
          tableau_.at(r, next_artificial) = 1.0;
          original_(r, next_artificial) = 1.0;
          basis_[r] = next_artificial++;
          break;
      }
    }
  }

  void SetCosts(const std::vector<double>& costs) {
    phase_costs_ = costs;
    reduced_.assign(total_cols_ + 1, 0.0);
    for (int j = 0; j < total_cols_; ++j) reduced_[j] = costs[j];
    for (int r = 0; r < tableau_.rows(); ++r) {
      if (!active_[r]) continue;
      const double cb = costs[basis_[r]];
      if (cb == 0.0) continue;
      const double* row = tableau_.row(r);
      for (int j = 0; j <= total_cols_; ++j) reduced_[j] -= cb * row[j];
    }
  }

  int ChooseEntering(bool allow_artificial, bool bland) const {
    const int limit = allow_artificial ? total_cols_ : artificial_begin_;
    int best = -1;
    double best_value = -options_.tolerance;
    for (int j = 0; j < limit; ++j) {
      if (reduced_[j] < best_value) {
        best = j;
        if (bland) return j;
        best_value = reduced_[j];
      }
    }
    return best;
  }

  // Harris two-pass ratio test. Pass one finds the largest step that keeps
  // every basic variable above -kFeasibilityTolerance; pass two picks, among
  // rows blocking within that step, the one with the largest pivot. Preferring
  // large pivots keeps the basis well conditioned. Bland mode takes the lowest
  // basic index among the exact minimum ratios instead.
  int ChooseLeaving(int entering, bool bland) {
    double column_max = 0.0;
    for (int r = 0; r < tableau_.rows(); ++r) {
      if (active_[r]) column_max = std::max(column_max, tableau_.at(r, entering));
    }
    const double pivot_floor = std::max(kPivotTolerance, kRelativePivot * column_max);
    if (bland) {
      int best = -1;
      double best_ratio = 0.0;
      for (int r = 0; r < tableau_.rows(); ++r) {
        if (!active_[r]) continue;
        const double a = tableau_.at(r, entering);
        if (a <= pivot_floor) continue;
        const double ratio = std::max(0.0, tableau_.rhs(r)) / a;
        if (best < 0 || ratio < best_ratio - 1e-12 * (1.0 + best_ratio) ||
            (ratio <= best_ratio + 1e-12 * (1.0 + best_ratio) &&
             basis_[r] < basis_[best])) {
          best = r;
          best_ratio = std::min(ratio, best < 0 ? ratio : best_ratio);
        }
      }
      return best;
    }
    double limit = INFINITY;
    for (int r = 0; r < tableau_.rows(); ++r) {
      if (!active_[r]) continue;
      const double a = tableau_.at(r, entering);
      if (a <= pivot_floor) continue;
      limit = std::min(limit, (std::max(0.0, tableau_.rhs(r)) + kFeasibilityTolerance) / a);
    }
    if (!std::isfinite(limit)) return -1;
    int best = -1;
    double best_pivot = 0.0;
    for (int r = 0; r < tableau_.rows(); ++r) {
      if (!active_[r]) continue;
      const double a = tableau_.at(r, entering);
      if (a <= pivot_floor) continue;
      if (std::max(0.0, tableau_.rhs(r)) / a <= limit && a > best_pivot) {
        best = r;
        best_pivot = a;
      }
    }
    return best;
  }

  void Pivot(int pivot_row, int entering) {
    double* prow = tableau_.row(pivot_row);
    const double inv = 1.0 / prow[entering];
    nonzeros_.clear();
    for (int j = 0; j <= total_cols_; ++j) {
      if (prow[j] != 0.0) {
        prow[j] *= inv;
        nonzeros_.push_back(j);
      }
    }
    prow[entering] = 1.0;
    for (int r = 0; r < tableau_.rows(); ++r) {
      if (r == pivot_row || !active_[r]) continue;
      double* row = tableau_.row(r);
      const double factor = row[entering];
      if (factor == 0.0) continue;
      for (int j : nonzeros_) row[j] -= factor * prow[j];
      row[entering] = 0.0;
    }
    const double factor = reduced_[entering];
    if (factor != 0.0) {
      for (int j : nonzeros_) reduced_[j] -= factor * prow[j];
      reduced_[entering] = 0.0;
    }
    basis_[pivot_row] = entering;
  }

  // Recomputes every active tableau row as B^-1 times the original rows,
  // where B holds the current basis columns, then refreshes reduced costs.
  void Reinvert() {
    last_reinvert_ = iterations_;
    std::vector<int> rows;
    for (int r = 0; r < tableau_.rows(); ++r) {
      if (active_[r]) rows.push_back(r);
    }
    const auto size = static_cast<Eigen::Index>(rows.size());
    if (size == 0) return;
    Eigen::MatrixXd basis_matrix(size, size);
    Eigen::MatrixXd system(size, total_cols_ + 1);
    for (Eigen::Index i = 0; i < size; ++i) {
      for (Eigen::Index k = 0; k < size; ++k) {
        basis_matrix(i, k) = original_(rows[i], basis_[rows[k]]);
      }
      system.row(i).head(total_cols_) = original_.row(rows[i]);
      system(i, total_cols_) = original_rhs_(rows[i]);
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    const Eigen::MatrixXd fresh = lu.solve(system);
    // A near-singular basis gives garbage; keep the pivoted tableau then.
    if (!fresh.allFinite()) return;
    for (Eigen::Index i = 0; i < size; ++i) {
      double* row = tableau_.row(rows[i]);
      for (int j = 0; j <= total_cols_; ++j) row[j] = fresh(i, j);
      for (Eigen::Index k = 0; k < size; ++k) {
        row[basis_[rows[k]]] = i == k ? 1.0 : 0.0;
      }
    }
    SetCosts(phase_costs_);
  }

  LpStatus Iterate(bool allow_artificial) {
    int degenerate_streak = 0;
    while (iterations_ < options_.max_iterations) {
      if (iterations_ - last_reinvert_ >= kReinvertInterval) Reinvert();
      const bool bland = degenerate_streak >= kDegenerateStreakForBland;
      int entering = ChooseEntering(allow_artificial, bland);
      int leaving = entering < 0 ? -1 : ChooseLeaving(entering, bland);
      if (leaving < 0 && iterations_ > last_reinvert_) {
        // Confirm the verdict on a fresh tableau.
        Reinvert();
        entering = ChooseEntering(allow_artificial, bland);
        leaving = entering < 0 ? -1 : ChooseLeaving(entering, bland);
      }
      if (entering < 0) return LpStatus::kOptimal;
      if (leaving < 0) return LpStatus::kUnbounded;
      const bool degenerate = tableau_.rhs(leaving) <= options_.tolerance;
      degenerate_streak = degenerate ? degenerate_streak + 1 : 0;
      Pivot(leaving, entering);
      ++iterations_;
    }
    return LpStatus::kIterationLimit;
  }

  void DriveOutArtificials() {
    for (int r = 0; r < tableau_.rows(); ++r) {
      if (!active_[r] || basis_[r] < artificial_begin_) continue;
      int column = -1;
      double best = 1e-9;
      for (int j = 0; j < artificial_begin_; ++j) {
        const double a = std::fabs(tableau_.at(r, j));
        if (a > best) {
          best = a;
          column = j;
        }
      }
      if (column >= 0) {
        Pivot(r, column);
      } else {
        // Redundant equality.
        active_[r] = false;
      }
    }
  }

  void Refine(std::vector<double>& values) const {
    std::vector<int> rows;
    std::vector<int> columns;
    for (int r = 0; r < tableau_.rows(); ++r) {
      if (!active_[r]) continue;
      if (basis_[r] >= artificial_begin_) return;
      rows.push_back(r);
      columns.push_back(basis_[r]);
    }
    const auto size = static_cast<Eigen::Index>(rows.size());
    if (size == 0) return;
    Eigen::MatrixXd basis_matrix(size, size);
    Eigen::VectorXd rhs(size);
    for (Eigen::Index i = 0; i < size; ++i) {
      rhs(i) = original_rhs_(rows[i]);
      for (Eigen::Index k = 0; k < size; ++k) {
        basis_matrix(i, k) = original_(rows[i], columns[k]);
      }
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    const Eigen::VectorXd solution = lu.solve(rhs);
    const double residual = (basis_matrix * solution - rhs).lpNorm<Eigen::Infinity>();
    if (!solution.allFinite() || residual > 1e-9 * rhs_scale_) return;
    for (Eigen::Index k = 0; k < size; ++k) {
      if (solution(k) < -1e-7) return;
    }
    for (Eigen::Index k = 0; k < size; ++k) {
      values[columns[k]] = std::max(0.0, solution(k));
    }
  }

  SimplexOptions options_;
  int num_structural_ = 0;
  int artificial_begin_ = 0;
  int total_cols_ = 0;
  double rhs_scale_ = 1.0;
  Tableau tableau_{0, 0};
  Eigen::MatrixXd original_;
  Eigen::VectorXd original_rhs_;
  std::vector<int> basis_;
  std::vector<bool> active_;
  std::vector<double> cost_;
  std::vector<double> scaled_cost_;
  std::vector<double> column_scale_;
  std::vector<double> phase_costs_;
  std::vector<double> reduced_;
  std::vector<int> column_to_var_;
  std::vector<int> nonzeros_;
  int iterations_ = 0;
  int last_reinvert_ = 0;
};

}  // namespace

std::string_view LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

LpResult SolveLp(const LinearProgram& program, const SimplexOptions& options) {
  Solver solver(program, options);
  return solver.Solve();
}

}  // namespace ncfmm
