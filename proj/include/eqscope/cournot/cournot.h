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

#ifndef EQSCOPE_COURNOT_COURNOT_H_
#define EQSCOPE_COURNOT_COURNOT_H_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eqscope/conic/program.h"
#include "eqscope/conic/solver.h"
#include "eqscope/core/game.h"

namespace eqscope {

// P(q) and dP/dq_i at a production profile.
struct PriceEvaluation {
  double price = 0.0;
  Vector gradient;
};
using PriceFunction = std::function<PriceEvaluation(const Vector& q)>;

// P(q) = 1 - alpha * sum(q).
PriceFunction LinearPrice(double alpha);

// Costs c_i(x) = sum_{k=1..d} a_i(k) x^k with a_i(0) = 0; coeffs(i, k - 1)
// holds a_i(k).
struct CournotModel {
  double alpha = 0.0;
  Matrix coeffs;

  int n() const { return static_cast<int>(coeffs.rows()); }
  int degree() const { return static_cast<int>(coeffs.cols()); }
  double Cost(int i, double x) const;
  double Marginal(int i, double x) const;
  double Curvature(int i, double x) const;
};

// n equalities q_i dP/dq_i(q) + P(q) = sum_k k a_i(k) q_i^(k-1), one per
// player, in the coefficient variable (n x d).
int BuildFocConstraints(conic::Program& program, const conic::Variable& coeffs,
                        const Vector& q, const PriceFunction& price);

// Sum-of-squares certificate that c_i'' >= 0 on the real line. Appends a
// Gram matrix of side floor((d - 2) / 2) + 1 with matched coefficients, and
// for odd d an equality fixing a(d) = 0; does nothing for d <= 1. Returns
// the number of PSD constraints added.
int BuildSosConvexity(conic::Program& program, const conic::Variable& coeffs,
                      int player);

struct CournotInstance {
  std::vector<Vector> observations;
  PriceFunction price;
  int degree = 1;
  Metric metric = Metric::kSumOfSquares;
  // Fixed radius; empty means delta is a decision variable.
  std::optional<double> delta;
};

struct CournotSetVariables {
  conic::Variable coeffs;
  std::vector<conic::Variable> perturbed;
};

// Coefficients of c and of each c^k with FOC equalities and SOS convexity
// on every c^k, and d(c^1..c^l | c) <= delta.
CournotSetVariables AppendCournotSet(conic::Program& program,
                                     const CournotInstance& inst,
                                     const conic::LinExpr& delta,
                                     const std::string& name);

struct CournotPerturbationResult {
  conic::SolveStatus status = conic::SolveStatus::kNumericalTrouble;
  double delta_star = 0.0;
  Matrix coeffs;
  std::vector<Matrix> perturbed;
  std::string message;
};

CournotPerturbationResult CournotMinPerturbation(const CournotInstance& inst,
                                                 const conic::Backend& backend);

struct CournotDiameterReport {
  double value = 0.0;
  bool unbounded = false;
  bool capped = false;
  bool empty = false;
  // (player, k - 1) of the coefficient attaining `value`.
  std::array<int, 2> argmax = {0, 0};
  // Optimal value of each per-coefficient program.
  Matrix per_coeff;
  bool complete = true;
  std::vector<std::string> diagnostics;
};

struct CournotDiameterOptions {
  int jobs = 0;
  double cap = 1e6;
};

// Largest gap a~_i(k) - a^_i(k) between two consistent coefficient sets,
// one program per coefficient. `inst.delta` must be set.
CournotDiameterReport CournotDiameter(const CournotInstance& inst,
                                      const conic::Backend& backend,
                                      const CournotDiameterOptions& options =
                                          {});

// Largest FOC residual of `coeffs` at q.
double FocResidual(const Matrix& coeffs, const Vector& q,
                   const PriceFunction& price);

// Equilibrium of the linear-price, linear-cost game: solves
// alpha q_i + alpha sum(q) = 1 - a_i.
Vector LinearCournotEquilibrium(double alpha, const Vector& a);

struct CournotSimParams {
  int n = 10;
  double alpha = 0.05;
  double a_hat = 0.01;
  // Sd of the underlying costs around a_hat.
  double sigma_game = 0.01;
  // Sd of the per-observation perturbations.
  double sigma_obs = 0.001;
  int l = 10;
  int n_games = 10;
  uint64_t seed = 0;
};

struct CournotSimGame {
  Vector costs;
  std::vector<Vector> perturbed_costs;
  std::vector<Vector> quantities;
};

// Underlying a_i = a_hat + max(Z, -a_hat); perturbed a^k_i = a_i +
// max(Z', -a_i); quantities from the FOC system. Draws with a nonpositive
// quantity are redrawn (at most 100 times, else SimulationError). Game g
// uses stream (seed, g, 0) for its costs and (seed, g, 1 + k) for
// observation k.
std::vector<CournotSimGame> SimulateCournot(const CournotSimParams& params);

}  // namespace eqscope

#endif  // EQSCOPE_COURNOT_COURNOT_H_
