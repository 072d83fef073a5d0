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

#include "eqscope/degeneracy/degeneracy.h"

#include <algorithm>
#include <cmath>

#include "Eigen/LU"
#include "eqscope/conic/program.h"
#include "eqscope/core/errors.h"

namespace eqscope {

using conic::LinExpr;
using conic::Program;
using conic::SolveStatus;
using conic::Variable;

namespace {

LinExpr Inner(const Matrix& v, const Variable& g) {
  LinExpr out;
  for (int i = 0; i < v.rows(); ++i) {
    for (int j = 0; j < v.cols(); ++j) {
      if (v(i, j) != 0.0) out += v(i, j) * g(i, j);
    }
  }
  return out;
}

void AddUnitBox(Program& program, const Variable& g) {
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) {
      program.AddGreaterEqual(g(i, j), 0.0);
      program.AddLessEqual(g(i, j), 1.0);
    }
  }
}

void CheckNoPayoff(const ObservationSet& obs) {
  if (obs.model() != ObservationModel::kNoPayoff) {
    throw ModelError("degeneracy analysis needs the no-payoff model");
  }
}

void CheckEquilibria(const std::vector<CorrelatedEquilibrium>& equilibria) {
  if (equilibria.empty()) throw ShapeError("no observations");
  for (const CorrelatedEquilibrium& e : equilibria) {
    if (e.m1() != equilibria[0].m1() || e.m2() != equilibria[0].m2()) {
      throw ShapeError("observation shapes differ");
    }
  }
}

}  // namespace

std::vector<TildeVector> BuildTildeVectors(const CorrelatedEquilibrium& e) {
  std::vector<TildeVector> out;
  for (int i = 0; i < e.m1(); ++i) {
    for (int ip = 0; ip < e.m1(); ++ip) {
      if (ip == i) continue;
      TildeVector t{i, ip, Matrix::Zero(e.m1(), e.m2())};
      t.v.row(i) = -e.probs().row(i);
      t.v.row(ip) = e.probs().row(i);
      out.push_back(std::move(t));
    }
  }
  return out;
}

std::vector<CorrelatedEquilibrium> PlayerView(const ObservationSet& obs,
                                              int player) {
  if (player != 0 && player != 1) throw DomainError("player must be 0 or 1");
  std::vector<CorrelatedEquilibrium> out;
  for (int k = 0; k < obs.size(); ++k) {
    const Matrix& p = obs[k].equilibrium.probs();
    out.emplace_back(player == 0 ? p : Matrix(p.transpose()));
  }
  return out;
}

std::vector<CorrelatedEquilibrium> PadColumns(
    const std::vector<CorrelatedEquilibrium>& equilibria) {
  std::vector<CorrelatedEquilibrium> out;
  for (const CorrelatedEquilibrium& e : equilibria) {
    if (e.m2() >= e.m1()) {
      out.push_back(e);
      continue;
    }
    Matrix p = Matrix::Zero(e.m1(), e.m1());
    p.leftCols(e.m2()) = e.probs();
    out.emplace_back(p);
  }
  return out;
}

StrictnessResult SolveStrictness(const ObservationSet& obs, double epsilon,
                                 const conic::Backend& backend, int player) {
  CheckNoPayoff(obs);
  return SolveStrictness(PlayerView(obs, player), epsilon, backend);
}

StrictnessResult SolveStrictness(
    const std::vector<CorrelatedEquilibrium>& equilibria, double epsilon,
    const conic::Backend& backend) {
  CheckEquilibria(equilibria);
  if (!(epsilon >= 0.0)) throw DomainError("epsilon must be nonnegative");
  const int m1 = equilibria[0].m1();
  const int m2 = equilibria[0].m2();
  Program program;
  const Variable g = program.AddMatrix(m1, m2, "G");
  AddUnitBox(program, g);
  std::vector<Variable> gk;
  std::vector<std::vector<Variable>> slack(equilibria.size());
  std::vector<LinExpr> squares;
  LinExpr total;
  for (size_t k = 0; k < equilibria.size(); ++k) {
    gk.push_back(program.AddMatrix(m1, m2, "G.k" + std::to_string(k)));
    for (const TildeVector& t : BuildTildeVectors(equilibria[k])) {
      if (t.IsZero()) continue;
      const Variable s = program.AddScalar("slack");
      program.AddGreaterEqual(s.expr(), 0.0);
      program.AddEqual(Inner(t.v, gk[k]) + s.expr(), 0.0);
      total += s.expr();
      slack[k].push_back(s);
    }
    for (int i = 0; i < m1; ++i) {
      for (int j = 0; j < m2; ++j) squares.push_back(gk[k](i, j) - g(i, j));
    }
  }
  program.AddEqual(total, epsilon);
  program.Minimize(0.0, std::move(squares));
  const conic::Solution sol = conic::Solve(program, backend);

  StrictnessResult out;
  out.status = sol.status;
  out.message = sol.message;
  if (!sol.ok()) return out;
  out.value = std::max(0.0, sol.objective);
  out.dual_value = sol.dual_objective;
  out.game = sol.MatrixValue(g);
  for (size_t k = 0; k < equilibria.size(); ++k) {
    out.perturbed.push_back(sol.MatrixValue(gk[k]));
    std::vector<double> values;
    for (const Variable& s : slack[k]) values.push_back(sol.Value(s));
    out.slack.push_back(std::move(values));
  }
  return out;
}

double DegeneracyThreshold(const ObservationSet& obs,
                           const conic::Backend& backend, int player) {
  CheckNoPayoff(obs);
  return DegeneracyThreshold(PlayerView(obs, player), backend);
}

double DegeneracyThreshold(
    const std::vector<CorrelatedEquilibrium>& equilibria,
    const conic::Backend& backend) {
  CheckEquilibria(equilibria);
  Program program;
  const Variable g =
      program.AddMatrix(equilibria[0].m1(), equilibria[0].m2(), "G");
  AddUnitBox(program, g);
  LinExpr total;
  for (const CorrelatedEquilibrium& e : equilibria) {
    for (const TildeVector& t : BuildTildeVectors(e)) {
      if (t.IsZero()) continue;
      const LinExpr dev = Inner(t.v, g);
      program.AddLessEqual(dev, 0.0);
      total += dev;
    }
  }
  program.Minimize(total);
  const conic::Solution sol = conic::Solve(program, backend);
  if (!sol.ok()) {
    throw SolverTroubleError("degeneracy threshold: " + ToString(sol.status) +
                             " (" + sol.message + ")");
  }
  return std::max(0.0, -sol.objective);
}

std::vector<bool> CheckSlater(const ObservationSet& obs, int player,
                              double tol) {
  std::vector<bool> out;
  for (const CorrelatedEquilibrium& e : PlayerView(obs, player)) {
    std::vector<int> rows;
    for (int i = 0; i < e.m1(); ++i) {
      if (e.probs().row(i).cwiseAbs().maxCoeff() > tol) rows.push_back(i);
    }
    Matrix nonzero(rows.size(), e.m2());
    for (size_t r = 0; r < rows.size(); ++r) {
      nonzero.row(r) = e.probs().row(rows[r]);
    }
    Eigen::FullPivLU<Matrix> lu(nonzero);
    lu.setThreshold(tol);
    out.push_back(lu.rank() == static_cast<int>(rows.size()));
  }
  return out;
}

double EnvelopeLower(double epsilon, double epsilon0, double p0) {
  return p0 * epsilon * epsilon / (epsilon0 * epsilon0);
}

double EnvelopeUpper(double epsilon, double epsilon0, double p0, int l,
                     int m) {
  const double c = std::sqrt(static_cast<double>(l)) * m / 2.0;
  const double root = (std::sqrt(p0) + c) * epsilon / epsilon0 - c;
  return root * root;
}

EnvelopeReport EnvelopeCheck(const ObservationSet& obs, double epsilon0,
                             const std::vector<double>& grid,
                             const conic::Backend& backend, int player) {
  CheckNoPayoff(obs);
  const std::vector<CorrelatedEquilibrium> view =
      PadColumns(PlayerView(obs, player));
  const int m = std::max(view[0].m1(), view[0].m2());
  const int l = obs.size();
  auto solve = [&](double eps) {
    const StrictnessResult r = SolveStrictness(view, eps, backend);
    if (r.status != SolveStatus::kOptimal) {
      throw SolverTroubleError("strictness program at eps " +
                               std::to_string(eps) + ": " +
                               ToString(r.status));
    }
    return r.value;
  };
  EnvelopeReport out;
  out.p0 = solve(epsilon0);
  if (out.p0 <= 1e-9) {
    throw DomainError("P(eps0) is zero; pick eps0 above the threshold");
  }
  out.ok = true;
  out.monotone = true;
  for (double eps : grid) {
    if (eps < epsilon0) throw DomainError("grid points must be >= eps0");
    const double p = solve(eps);
    const double lo = EnvelopeLower(eps, epsilon0, out.p0);
    const double hi = EnvelopeUpper(eps, epsilon0, out.p0, l, m);
    if (!out.value.empty() && p < out.value.back() - 1e-6) {
      out.monotone = false;
    }
    out.epsilon.push_back(eps);
    out.value.push_back(p);
    out.lower.push_back(lo);
    out.upper.push_back(hi);
    out.ok = out.ok && lo - 1e-6 <= p && p <= hi + 1e-6;
  }
  return out;
}

}  // namespace eqscope
