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

#ifndef EQSCOPE_RECOVERY_RECOVERY_H_
#define EQSCOPE_RECOVERY_RECOVERY_H_

#include <array>
#include <vector>

#include "eqscope/conic/solver.h"
#include "eqscope/consistency/consistency.h"
#include "eqscope/core/game.h"

namespace eqscope {

// Rows are row-major vectorized equilibria of linearly independent
// observations.
struct ObservationMatrix {
  Matrix e;
  // Observation index of each row.
  std::vector<int> rows;
  // 2-norm condition number.
  double condition = 1.0;
  bool singular = false;
};

inline constexpr double kSingularCondition = 1e12;

ObservationMatrix MakeObservationMatrix(const Matrix& e);

// Greedy pivoted Gram-Schmidt over the observed equilibria. Throws
// NotIdentifiableError when fewer than m1*m2 independent rows exist.
ObservationMatrix SelectIndependentSubset(const ObservationSet& observations,
                                          double tol = 1e-10);

enum class InducedNorm { kTwo, kInfinity };

// ||E^-1||_2 by power iteration on (E^-1)' E^-1, or ||E^-1||_inf as the
// largest absolute row sum.
double InducedNormInverse(const Matrix& e, InducedNorm which,
                          double rel_tol = 1e-8);
double InducedNormInverse(const ObservationMatrix& e, InducedNorm which);

struct RecoveryBoundCheck {
  std::array<double, 2> lhs = {0.0, 0.0};
  std::array<double, 2> rhs = {0.0, 0.0};
  double norm_inverse = 0.0;
  bool ok = false;
  // Bound from ||E dG|| <= 2 sqrt(delta) in the 2-norm: 2 ||E^-1||_2
  // sqrt(delta). Same as rhs for dinf.
  double direct_rhs = 0.0;
  bool direct_ok = false;
};

// d2: ||G_p - Ghat_p||_2 <= sqrt(2 ||E^-1||_2 delta).
// dinf: max |G_p - Ghat_p| <= 2 ||E^-1||_inf delta.
// Tolerance 1e-6 on both.
RecoveryBoundCheck VerifyRecoveryBound(const Game& truth,
                                       const Game& recovered,
                                       const ObservationMatrix& e,
                                       double delta, Metric metric);

// Four near-uniform equilibria with 0.25 + eps on distinct profiles and
// payoffs (delta, -delta, delta, -delta) for player 1; player 2 is
// identically zero. Player 1's payoffs in both explanations depend only on
// the column, so the row player is indifferent and every observation is a
// correlated equilibrium.
struct Example2 {
  double epsilon = 0.0;
  double delta = 0.0;
  ObservationSet observations;
  Matrix e;
  Game game;
  std::vector<Game> perturbed;
  Game rival;
  std::vector<Game> rival_perturbed;
  // dinf(perturbed | game) = delta / (0.5 + 2 eps / 3).
  double game_distance = 0.0;
  // dinf(rival_perturbed | rival) = 2 delta / (3 - 4 eps).
  double rival_distance = 0.0;
  // max |game - rival| of the constructed pair: delta / eps.
  double gap = 0.0;
  // delta / eps - delta / (0.5 + 2 eps / 3); also at least
  // delta (1 / eps - 2).
  double gap_closed_form = 0.0;
};

Example2 Example2Instance(double epsilon, double delta);

// Recovery restricted to profiles with positive probability in some
// observation. Unobserved payoffs carry no perturbation and sit at least one
// unit below every observed payoff of the same player, in the game and in
// each perturbed game.
struct SparseRecovery {
  PerturbationResult result;
  // observed(i, j) is 1 when some observation puts mass on (i, j).
  Matrix observed;
};

Matrix ObservedSupport(const ObservationSet& observations,
                       double tol = 1e-12);

SparseRecovery SparseSupportRecovery(const ConsistencyInstance& inst,
                                     const conic::Backend& backend);

}  // namespace eqscope

#endif  // EQSCOPE_RECOVERY_RECOVERY_H_
