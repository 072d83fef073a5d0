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

#include "eqscope/cournot/cournot.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "eqscope/core/errors.h"
#include "eqscope/util/parallel.h"
#include "eqscope/util/rng.h"

namespace eqscope {

using conic::LinExpr;
using conic::Program;
using conic::SolveStatus;
using conic::Variable;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckInstance(const CournotInstance& inst) {
  if (inst.observations.empty()) throw ShapeError("no observations");
  if (inst.degree < 1) throw DomainError("degree must be at least 1");
  if (!inst.price) throw DomainError("price function missing");
  const int n = static_cast<int>(inst.observations[0].size());
  if (n < 1) throw ShapeError("empty production profile");
  for (const Vector& q : inst.observations) {
    if (q.size() != n) throw ShapeError("observation sizes differ");
    if (!q.allFinite() || q.minCoeff() < 0.0) {
      throw DomainError("quantities must be finite and nonnegative");
    }
  }
}

}  // namespace

PriceFunction LinearPrice(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("price slope must be positive");
  return [alpha](const Vector& q) {
    return PriceEvaluation{1.0 - alpha * q.sum(),
                           Vector::Constant(q.size(), -alpha)};
  };
}

double CournotModel::Cost(int i, double x) const {
  double out = 0.0;
  for (int k = degree(); k >= 1; --k) out = (out + coeffs(i, k - 1)) * x;
  return out;
}

double CournotModel::Marginal(int i, double x) const {
  double out = 0.0;
  for (int k = degree(); k >= 1; --k) out = out * x + k * coeffs(i, k - 1);
  return out;
}

double CournotModel::Curvature(int i, double x) const {
  double out = 0.0;
  for (int k = degree(); k >= 2; --k) {
    out = out * x + k * (k - 1) * coeffs(i, k - 1);
  }
  return out;
}

int BuildFocConstraints(Program& program, const Variable& coeffs,
                        const Vector& q, const PriceFunction& price) {
  if (coeffs.rows() != q.size()) {
    throw ShapeError("coefficient rows must match the player count");
  }
  const PriceEvaluation p = price(q);
  if (p.gradient.size() != q.size()) {
    throw ShapeError("price gradient has the wrong size");
  }
  for (int i = 0; i < q.size(); ++i) {
    LinExpr marginal;
    double power = 1.0;
    for (int k = 1; k <= coeffs.cols(); ++k) {
      marginal += (k * power) * coeffs(i, k - 1);
      power *= q(i);
    }
    program.AddEqual(marginal, q(i) * p.gradient(i) + p.price);
  }
  return static_cast<int>(q.size());
}

int BuildSosConvexity(Program& program, const Variable& coeffs, int player) {
  const int d = coeffs.cols();
  if (d <= 1) return 0;
  // For odd d, c'' has odd degree and can only be nonnegative with a zero
  // leading coefficient; pinning it keeps the Gram block strictly feasible.
  const int top = d - d % 2;
  if (top < d) program.AddEqual(coeffs(player, d - 1), 0.0);
  const int s = (top - 2) / 2;
  const Variable gram =
      program.AddSymmetric(s + 1, "sos" + std::to_string(player));
  for (int t = 0; t <= 2 * s; ++t) {
    LinExpr sum;
    for (int r = std::max(0, t - s); r <= std::min(t, s); ++r) {
      sum += gram(r, t - r);
    }
    // Coefficient of x^t in c'' is (t + 2)(t + 1) a(t + 2).
    LinExpr target;
    if (t + 2 <= top) target = ((t + 2.0) * (t + 1.0)) * coeffs(player, t + 1);
    program.AddEqual(sum, target);
  }
  program.AddPsd(gram);
  return 1;
}

CournotSetVariables AppendCournotSet(Program& program,
                                     const CournotInstance& inst,
                                     const LinExpr& delta,
                                     const std::string& name) {
  CheckInstance(inst);
  const int n = static_cast<int>(inst.observations[0].size());
  const int d = inst.degree;
  CournotSetVariables vars;
  vars.coeffs = program.AddMatrix(n, d, name + ".a");
  std::vector<LinExpr> diffs;
  for (size_t k = 0; k < inst.observations.size(); ++k) {
    const Variable ak =
        program.AddMatrix(n, d, name + ".a.k" + std::to_string(k));
    vars.perturbed.push_back(ak);
    BuildFocConstraints(program, ak, inst.observations[k], inst.price);
    for (int i = 0; i < n; ++i) BuildSosConvexity(program, ak, i);
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < d; ++c) diffs.push_back(ak(i, c) - vars.coeffs(i, c));
    }
  }
  if (inst.metric == Metric::kSumOfSquares) {
    program.AddSquaredNorm(std::move(diffs), delta);
  } else {
    const bool zero = delta.IsConstant() && delta.constant() == 0.0;
    for (const LinExpr& diff : diffs) {
      if (zero) {
        program.AddEqual(diff, 0.0);
      } else {
        program.AddLessEqual(diff, delta);
        program.AddLessEqual(-diff, delta);
      }
    }
  }
  return vars;
}

CournotPerturbationResult CournotMinPerturbation(
    const CournotInstance& inst, const conic::Backend& backend) {
  Program program;
  const Variable delta = program.AddScalar("delta");
  const CournotSetVariables vars =
      AppendCournotSet(program, inst, delta.expr(), "c");
  if (inst.metric == Metric::kMax) program.AddGreaterEqual(delta.expr(), 0.0);
  program.Minimize(delta.expr());
  const conic::Solution sol = conic::Solve(program, backend);
  CournotPerturbationResult out;
  out.status = sol.status;
  out.message = sol.message;
  if (!sol.ok()) return out;
  out.delta_star = std::max(0.0, sol.Value(delta));
  out.coeffs = sol.MatrixValue(vars.coeffs);
  for (const Variable& ak : vars.perturbed) {
    out.perturbed.push_back(sol.MatrixValue(ak));
  }
  return out;
}

CournotDiameterReport CournotDiameter(const CournotInstance& inst,
                                      const conic::Backend& backend,
                                      const CournotDiameterOptions& options) {
  CheckInstance(inst);
  if (!inst.delta) throw DomainError("diameter needs a fixed delta");
  if (!(*inst.delta >= 0.0)) throw DomainError("delta must be nonnegative");
  const int n = static_cast<int>(inst.observations[0].size());
  const int d = inst.degree;
  struct Entry {
    SolveStatus status = SolveStatus::kNumericalTrouble;
    double value = 0.0;
    std::string message;
  };
  std::vector<Entry> results(n * d);
  ParallelFor(n * d, options.jobs, [&](int task) {
    const int i = task / d;
    const int c = task % d;
    Program program;
    const LinExpr delta(*inst.delta);
    const CournotSetVariables tilde =
        AppendCournotSet(program, inst, delta, "tilde");
    const CournotSetVariables hat =
        AppendCournotSet(program, inst, delta, "hat");
    program.Maximize(tilde.coeffs(i, c) - hat.coeffs(i, c));
    const conic::Solution sol = conic::Solve(program, backend);
    results[task] = {sol.status, sol.objective, sol.message};
  });

  CournotDiameterReport report;
  report.per_coeff = Matrix::Zero(n, d);
  double best = -kInf;
  int infeasible = 0;
  for (int task = 0; task < n * d; ++task) {
    const Entry& r = results[task];
    const int i = task / d;
    const int c = task % d;
    double value = r.value;
    if (r.status == SolveStatus::kInfeasible) {
      ++infeasible;
      report.per_coeff(i, c) = -kInf;
      continue;
    }
    if (r.status == SolveStatus::kUnbounded) {
      value = kInf;
      report.unbounded = true;
    } else if (r.status != SolveStatus::kOptimal) {
      report.complete = false;
      report.per_coeff(i, c) = std::numeric_limits<double>::quiet_NaN();
      report.diagnostics.push_back("coefficient (" + std::to_string(i) + "," +
                                   std::to_string(c + 1) +
                                   "): " + ToString(r.status) + " " +
                                   r.message);
      continue;
    } else if (value > options.cap) {
      value = kInf;
      report.capped = true;
    }
    report.per_coeff(i, c) = value;
    if (value > best) {
      best = value;
      report.argmax = {i, c};
    }
  }
  if (infeasible == n * d) {
    report.empty = true;
  } else if (infeasible > 0) {
    report.complete = false;
    report.diagnostics.push_back(
        std::to_string(infeasible) +
        " coefficient programs infeasible while others solved");
  }
  report.value = std::isfinite(best) || best == kInf ? best : 0.0;
  if (report.value < 0.0) report.value = 0.0;
  return report;
}

double FocResidual(const Matrix& coeffs, const Vector& q,
                   const PriceFunction& price) {
  const PriceEvaluation p = price(q);
  const CournotModel model{0.0, coeffs};
  double worst = 0.0;
  for (int i = 0; i < q.size(); ++i) {
    const double lhs = q(i) * p.gradient(i) + p.price;
    worst = std::max(worst, std::abs(lhs - model.Marginal(i, q(i))));
  }
  return worst;
}

Vector LinearCournotEquilibrium(double alpha, const Vector& a) {
  if (!(alpha > 0.0)) throw DomainError("price slope must be positive");
  const double n = static_cast<double>(a.size());
  // Summing the n equations gives alpha (n + 1) sum(q) = n - sum(a).
  const double total = (n - a.sum()) / (alpha * (n + 1.0));
  Vector q = (Vector::Ones(a.size()) - a) / alpha -
             Vector::Constant(a.size(), total);
  return q;
}

std::vector<CournotSimGame> SimulateCournot(const CournotSimParams& params) {
  if (params.n < 1 || params.l < 0 || params.n_games < 1) {
    throw DomainError("player, observation and game counts must be positive");
  }
  if (!(params.alpha > 0.0) || params.a_hat < 0.0 || params.sigma_game < 0.0 ||
      params.sigma_obs < 0.0) {
    throw DomainError("simulation parameters out of range");
  }
  std::vector<CournotSimGame> games;
  for (int g = 0; g < params.n_games; ++g) {
    CournotSimGame game;
    std::mt19937_64 rng =
        StreamRng(params.seed, {static_cast<uint64_t>(g), 0});
    std::normal_distribution<double> base(0.0, params.sigma_game);
    game.costs.resize(params.n);
    for (int i = 0; i < params.n; ++i) {
      const double z = params.sigma_game > 0.0 ? base(rng) : 0.0;
      game.costs(i) = params.a_hat + std::max(z, -params.a_hat);
    }
    for (int k = 0; k < params.l; ++k) {
      std::mt19937_64 obs_rng =
          StreamRng(params.seed, {static_cast<uint64_t>(g),
                                  static_cast<uint64_t>(k) + 1});
      std::normal_distribution<double> noise(0.0, params.sigma_obs);
      bool done = false;
      for (int attempt = 0; attempt < 100 && !done; ++attempt) {
        Vector ak(params.n);
        for (int i = 0; i < params.n; ++i) {
          const double z = params.sigma_obs > 0.0 ? noise(obs_rng) : 0.0;
          ak(i) = game.costs(i) + std::max(z, -game.costs(i));
        }
        const Vector q = LinearCournotEquilibrium(params.alpha, ak);
        if (q.minCoeff() <= 0.0) continue;
        game.perturbed_costs.push_back(ak);
        game.quantities.push_back(q);
        done = true;
      }
      if (!done) {
        throw SimulationError("no positive equilibrium after 100 draws");
      }
    }
    games.push_back(std::move(game));
  }
  return games;
}

}  // namespace eqscope
