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

#ifndef EQSCOPE_CONSISTENCY_CONSISTENCY_H_
#define EQSCOPE_CONSISTENCY_CONSISTENCY_H_

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "eqscope/conic/program.h"
#include "eqscope/conic/solver.h"
#include "eqscope/core/game.h"

namespace eqscope {

// Matrix variables holding both players' payoffs of one game.
struct GameVariables {
  std::array<conic::Variable, 2> payoff;

  conic::LinExpr operator()(int player, int i, int j) const {
    return payoff[player](i, j);
  }
  int m1() const { return payoff[0].rows(); }
  int m2() const { return payoff[0].cols(); }
  Game Value(const conic::Solution& solution) const;
};

GameVariables AddGameVariables(conic::Program& program, int m1, int m2,
                               const std::string& name);

// Properties the recovered game must satisfy.
struct ZeroSum {};
// ||G1 + G2||_1 <= eps (entrywise one-norm).
struct EpsZeroSum {
  double eps = 0.0;
};
// Some potential Phi with Phi(i,j) - Phi(i',j) = G1(i,j) - G1(i',j) and
// Phi(i,j) - Phi(i,j') = G2(i,j) - G2(i,j').
struct ExactPotential {};
// G_p = offset[p] + sum_t theta_t * basis[p][t]; entries of `pinned` that
// hold a value fix the matching theta.
struct LinearParam {
  std::array<Matrix, 2> offset;
  std::array<std::vector<Matrix>, 2> basis;
  std::vector<std::optional<double>> pinned;

  int num_params() const { return static_cast<int>(basis[0].size()); }
};
using PropertySpec = std::variant<ZeroSum, EpsZeroSum, ExactPotential,
                                  LinearParam>;

// Extra convex restrictions on the perturbations; receives the base game
// and the perturbed games after the metric ball has been appended.
using PerturbationHook = std::function<void(
    conic::Program&, const GameVariables&, std::span<const GameVariables>)>;

struct ConsistencyInstance {
  ObservationSet observations;
  Metric metric = Metric::kMax;
  // Fixed radius; empty means delta is a decision variable.
  std::optional<double> delta;
  std::optional<PropertySpec> property;
  PerturbationHook hook;
  // Skip deviation inequalities whose coefficients are all zero.
  bool drop_vacuous = false;
};

// Deviation inequalities making `e` a correlated equilibrium of `game`.
// Returns the number of constraints appended: m1(m1-1) + m2(m2-1), fewer if
// drop_vacuous removes all-zero rows.
int BuildEquilibriumConstraints(conic::Program& program,
                                const GameVariables& game,
                                const CorrelatedEquilibrium& e,
                                bool drop_vacuous = false);

// d(G^1 - beta^1, ..., G^l - beta^l | G) <= delta. Shifters are subtracted
// when `observations` uses the shifter model. A d2 ball is one squared-norm
// constraint; a d-infinity ball is 2*2*l*m1*m2 inequalities, or l*2*m1*m2
// equalities when delta is the constant 0.
int BuildMetricConstraint(conic::Program& program, const GameVariables& game,
                          std::span<const GameVariables> perturbed,
                          Metric metric, const conic::LinExpr& delta,
                          const ObservationSet& observations);

// <e^k, G_p^k> = v_p^k for every observation and player (2l equalities).
int BuildPayoffInfoConstraints(conic::Program& program,
                               std::span<const GameVariables> perturbed,
                               const ObservationSet& observations);

int AttachProperty(conic::Program& program, const PropertySpec& spec,
                   const GameVariables& game);

struct ConsistentSetVariables {
  GameVariables game;
  std::vector<GameVariables> perturbed;
};

// Appends one copy of S_d(delta) (base game, perturbed games and all model,
// metric, property and hook constraints).
ConsistentSetVariables AppendConsistentSet(conic::Program& program,
                                           const ConsistencyInstance& inst,
                                           const conic::LinExpr& delta,
                                           const std::string& name);

// Whether `game` belongs to S_d(delta). Throws SolverTroubleError when the
// backend cannot decide.
bool Membership(const Game& game, const ConsistencyInstance& inst,
                const conic::Backend& backend);

struct PerturbationResult {
  conic::SolveStatus status = conic::SolveStatus::kNumericalTrouble;
  double delta_star = 0.0;
  Game game;
  std::vector<Game> perturbed;
  std::string message;
};

// Smallest delta with a consistent game, and a witness.
PerturbationResult MinPerturbation(const ConsistencyInstance& inst,
                                   const conic::Backend& backend);

// Least eps (bisection, absolute tolerance `tol`) for which the property
// family(eps) admits a consistent game with delta* <= delta_budget.
double PropertyThreshold(const ConsistencyInstance& inst,
                         const std::function<PropertySpec(double)>& family,
                         double delta_budget, const conic::Backend& backend,
                         double tol = 1e-4);

}  // namespace eqscope

#endif  // EQSCOPE_CONSISTENCY_CONSISTENCY_H_
