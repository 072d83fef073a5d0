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

#include "eqscope/conic/solver.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace eqscope::conic {

std::string ToString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
    case SolveStatus::kNumericalTrouble:
      return "numerical_trouble";
    case SolveStatus::kUnsupported:
      return "unsupported";
  }
  return "numerical_trouble";
}

Matrix Solution::MatrixValue(const Variable& v) const {
  Matrix out(v.rows(), v.cols());
  for (int r = 0; r < v.rows(); ++r) {
    for (int c = 0; c < v.cols(); ++c) out(r, c) = x.at(v.index(r, c));
  }
  return out;
}

double MaxViolation(const Program& program, std::span<const double> x) {
  double worst = 0.0;
  for (const LinearConstraint& c : program.linear()) {
    const double v = c.expr.Evaluate(x);
    switch (c.relation) {
      case Relation::kLessEqual:
        worst = std::max(worst, v);
        break;
      case Relation::kEqual:
        worst = std::max(worst, std::abs(v));
        break;
      case Relation::kGreaterEqual:
        worst = std::max(worst, -v);
        break;
    }
  }
  for (const SocConstraint& c : program.soc()) {
    double norm2 = 0.0;
    for (const LinExpr& e : c.x) norm2 += std::pow(e.Evaluate(x), 2);
    worst = std::max(worst, std::sqrt(norm2) - c.t.Evaluate(x));
  }
  for (const SquaredNormConstraint& c : program.squared_norm()) {
    double norm2 = 0.0;
    for (const LinExpr& e : c.x) norm2 += std::pow(e.Evaluate(x), 2);
    worst = std::max(worst, norm2 - c.bound.Evaluate(x));
  }
  for (const PsdConstraint& c : program.psd()) {
    Matrix m(c.size, c.size);
    for (int r = 0; r < c.size; ++r) {
      for (int col = 0; col <= r; ++col) {
        m(r, col) = m(col, r) = c.lower[r * (r + 1) / 2 + col].Evaluate(x);
      }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
    worst = std::max(worst, -eig.eigenvalues().minCoeff());
  }
  return worst;
}

double EvaluateObjective(const Program& program, std::span<const double> x) {
  double v = program.objective().linear.Evaluate(x);
  for (const LinExpr& e : program.objective().squares) {
    v += std::pow(e.Evaluate(x), 2);
  }
  return v;
}

Solution Solve(const Program& program, const Backend& backend) {
  std::vector<std::string> diagnostics = program.Validate();
  if (!diagnostics.empty()) {
    std::string what = "invalid program:";
    for (const std::string& d : diagnostics) what += "\n  " + d;
    throw InvalidProgramError(what, std::move(diagnostics));
  }
  Solution sol = backend.Solve(program);
  if (sol.status == SolveStatus::kOptimal) {
    const double violation = MaxViolation(program, sol.x);
    if (!(violation <= kResidualTolerance)) {
      sol.message = "residual " + std::to_string(violation) +
                    " on re-substitution (" + sol.message + ")";
      sol.status = SolveStatus::kNumericalTrouble;
    }
  }
  return sol;
}

}  // namespace eqscope::conic
