// Copyright 2026 The eqscope Authors.
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

#include "eqscope/conic/simplex.h"

#include <cmath>
#include <limits>
#include <vector>

#include "eqscope/conic/standard_form.h"

namespace eqscope::conic {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-8;
constexpr int kMaxPivots = 50000;

// Tableau over rows T x = rhs, x >= 0, with an explicit basis.
class Tableau {
 public:
  Tableau(Matrix t, Vector rhs, std::vector<int> basis)
      : t_(std::move(t)), rhs_(std::move(rhs)), basis_(std::move(basis)) {}

  // Minimizes cost'x over columns [0, active_cols). Returns false if
  // unbounded or out of pivots.
  bool Optimize(const Vector& cost, int active_cols, bool& unbounded) {
    unbounded = false;
    for (int pivots = 0; pivots < kMaxPivots; ++pivots) {
      // Reduced costs.
      Vector cb(t_.rows());
      for (int r = 0; r < t_.rows(); ++r) cb(r) = cost(basis_[r]);
      int enter = -1;
      for (int j = 0; j < active_cols; ++j) {
        if (IsBasic(j)) continue;
        const double reduced = cost(j) - cb.dot(t_.col(j));
        if (reduced < -kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < t_.rows(); ++r) {
        const double a = t_(r, enter);
        if (a > kPivotTol) {
          const double ratio = rhs_(r) / a;
          if (ratio < best - 1e-12 ||
              (std::abs(ratio - best) <= 1e-12 && leave >= 0 &&
               basis_[r] < basis_[leave])) {
            best = ratio;
            leave = r;
          }
        }
      }
      if (leave < 0) {
        unbounded = true;
        return false;
      }
      Pivot(leave, enter);
    }
    return false;
  }

  void Pivot(int r, int j) {
    const double piv = t_(r, j);
    t_.row(r) /= piv;
    rhs_(r) /= piv;
    for (int i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, j);
      if (f == 0.0) continue;
      t_.row(i) -= f * t_.row(r);
      rhs_(i) -= f * rhs_(r);
    }
    basis_[r] = j;
  }

  bool IsBasic(int j) const {
    for (int b : basis_) {
      if (b == j) return true;
    }
    return false;
  }

  void DropRow(int r) {
    const int rows = static_cast<int>(t_.rows());
    t_.row(r) = t_.row(rows - 1);
    rhs_(r) = rhs_(rows - 1);
    basis_[r] = basis_[rows - 1];
    t_.conservativeResize(rows - 1, Eigen::NoChange);
    rhs_.conservativeResize(rows - 1);
    basis_.pop_back();
  }

  Matrix& t() { return t_; }
  Vector& rhs() { return rhs_; }
  std::vector<int>& basis() { return basis_; }

 private:
  Matrix t_;
  Vector rhs_;
  std::vector<int> basis_;
};

}  // namespace

Solution SimplexBackend::Solve(const Program& program) const {
  Solution out;
  if (program.HasConicConstraints()) {
    out.status = SolveStatus::kUnsupported;
    out.message = "simplex backend handles linear programs only";
    return out;
  }
  const StandardForm p = Lower(program);
  const int n = p.num_vars();
  const int rows_a = static_cast<int>(p.A.rows());
  const int rows_g = static_cast<int>(p.G.rows());
  const int rows = rows_a + rows_g;
  // Columns: x+ (n), x- (n), slacks (rows_g), artificials (rows).
  const int structural = 2 * n + rows_g;
  const int cols = structural + rows;
  Matrix t = Matrix::Zero(rows, cols);
  Vector rhs(rows);
  const Matrix a = Matrix(p.A);
  const Matrix g = Matrix(p.G);
  for (int r = 0; r < rows_a; ++r) {
    t.block(r, 0, 1, n) = a.row(r);
    t.block(r, n, 1, n) = -a.row(r);
    rhs(r) = p.b(r);
  }
  for (int r = 0; r < rows_g; ++r) {
    t.block(rows_a + r, 0, 1, n) = g.row(r);
    t.block(rows_a + r, n, 1, n) = -g.row(r);
    t(rows_a + r, 2 * n + r) = 1.0;
    rhs(rows_a + r) = p.h(r);
  }
  std::vector<int> basis(rows);
  for (int r = 0; r < rows; ++r) {
    if (rhs(r) < 0.0) {
      t.row(r) *= -1.0;
      rhs(r) *= -1.0;
    }
    t(r, structural + r) = 1.0;
    basis[r] = structural + r;
  }
  Tableau tab(std::move(t), std::move(rhs), std::move(basis));

  Vector phase1 = Vector::Zero(cols);
  phase1.tail(rows).setOnes();
  bool unbounded = false;
  if (!tab.Optimize(phase1, cols, unbounded)) {
    out.status = SolveStatus::kNumericalTrouble;
    out.message = "phase one did not terminate";
    return out;
  }
  double infeas = 0.0;
  for (int r = 0; r < tab.t().rows(); ++r) {
    if (tab.basis()[r] >= structural) infeas += tab.rhs()(r);
  }
  if (infeas > kFeasTol * (1.0 + tab.rhs().cwiseAbs().maxCoeff())) {
    out.status = SolveStatus::kInfeasible;
    out.message = "phase one optimum is positive";
    return out;
  }
  // Drive remaining artificials out of the basis.
  for (int r = 0; r < tab.t().rows();) {
    if (tab.basis()[r] < structural) {
      ++r;
      continue;
    }
    int col = -1;
    for (int j = 0; j < structural; ++j) {
      if (std::abs(tab.t()(r, j)) > kPivotTol && !tab.IsBasic(j)) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      tab.Pivot(r, col);
      ++r;
    } else {
      tab.DropRow(r);
    }
  }

  Vector cost = Vector::Zero(cols);
  cost.head(n) = p.c;
  cost.segment(n, n) = -p.c;
  if (!tab.Optimize(cost, structural, unbounded)) {
    out.status = unbounded ? SolveStatus::kUnbounded
                           : SolveStatus::kNumericalTrouble;
    out.message = unbounded ? "unbounded ray found" : "pivot limit reached";
    return out;
  }
  Vector full = Vector::Zero(cols);
  for (int r = 0; r < tab.t().rows(); ++r) full(tab.basis()[r]) = tab.rhs()(r);
  const Vector x = full.head(n) - full.segment(n, n);
  out.status = SolveStatus::kOptimal;
  out.x.assign(x.data(), x.data() + p.num_original);
  out.objective = p.objective_sign * (p.c.dot(x) + p.c_offset);
  out.dual_objective = out.objective;
  out.message = "optimal basis";
  return out;
}

}  // namespace eqscope::conic
