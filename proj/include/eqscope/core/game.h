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

#ifndef EQSCOPE_CORE_GAME_H_
#define EQSCOPE_CORE_GAME_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace eqscope {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr int kMaxActionsPerPlayer = 4;
inline constexpr int kMaxProfiles = 16;

// A two-player finite game. Player 1 picks the row i, player 2 the column j;
// payoff(p)(i, j) is the payoff of player p (0 or 1) at profile (i, j).
class Game {
 public:
  Game() = default;
  Game(Matrix payoff1, Matrix payoff2);

  static Game Zero(int m1, int m2);

  int m1() const { return static_cast<int>(payoff_[0].rows()); }
  int m2() const { return static_cast<int>(payoff_[0].cols()); }
  const Matrix& payoff(int player) const { return payoff_.at(player); }
  Matrix& mutable_payoff(int player) { return payoff_.at(player); }

  Game operator+(const Game& other) const;
  Game operator-(const Game& other) const;
  bool IsApprox(const Game& other, double tol) const;

 private:
  std::array<Matrix, 2> payoff_;
};

// A probability distribution over action profiles. Construction clamps
// entries in [-1e-12, 0) to zero and renormalizes sums within 1e-9 of one;
// anything else throws DomainError.
class CorrelatedEquilibrium {
 public:
  CorrelatedEquilibrium() = default;
  explicit CorrelatedEquilibrium(Matrix probs);

  static CorrelatedEquilibrium PointMass(int m1, int m2, int i, int j);

  int m1() const { return static_cast<int>(probs_.rows()); }
  int m2() const { return static_cast<int>(probs_.cols()); }
  const Matrix& probs() const { return probs_; }
  double operator()(int i, int j) const { return probs_(i, j); }

 private:
  Matrix probs_;
};

enum class ObservationModel { kPartialPayoff, kPayoffShifter, kNoPayoff };

std::string ToString(ObservationModel model);
ObservationModel ObservationModelFromString(const std::string& name);

struct Observation {
  CorrelatedEquilibrium equilibrium;
  // Expected equilibrium payoff of each player (partial payoff model).
  std::optional<std::array<double, 2>> payoff_value;
  // Observed additive payoff shifter (shifter model).
  std::optional<Game> shifter;
};

// Observations of equilibria of l perturbed games sharing one shape.
class ObservationSet {
 public:
  ObservationSet() = default;
  ObservationSet(ObservationModel model, std::vector<Observation> observations);

  ObservationModel model() const { return model_; }
  int m1() const { return m1_; }
  int m2() const { return m2_; }
  int size() const { return static_cast<int>(observations_.size()); }
  const Observation& operator[](int k) const { return observations_.at(k); }
  const std::vector<Observation>& observations() const {
    return observations_;
  }

 private:
  ObservationModel model_ = ObservationModel::kNoPayoff;
  int m1_ = 0;
  int m2_ = 0;
  std::vector<Observation> observations_;
};

enum class Metric { kSumOfSquares, kMax };

std::string ToString(Metric metric);
Metric MetricFromString(const std::string& name);

// Sum of squared entrywise gaps (kSumOfSquares) or the largest absolute gap
// (kMax) between `game` and every perturbed game, over both players.
double MetricDistance(Metric metric, const Game& game,
                      std::span<const Game> perturbed);
// Same, after removing the shifter of observation k from perturbed game k.
double MetricDistance(Metric metric, const Game& game,
                      std::span<const Game> perturbed,
                      const ObservationSet& observations);

// Largest violation of a deviation inequality (0 if none).
double EquilibriumViolation(const Game& game, const CorrelatedEquilibrium& e);
bool IsCorrelatedEquilibrium(const Game& game, const CorrelatedEquilibrium& e,
                             double tol = 1e-9);

// Vertices of the correlated-equilibrium polytope of `game`, found by double
// description starting from the simplex of point masses. Throws
// CapacityError above kMaxProfiles profiles.
std::vector<CorrelatedEquilibrium> EnumerateCeVertices(const Game& game);

// Pure profiles and the fully mixed equilibrium of a 2x2 game, as
// distributions over profiles.
std::vector<CorrelatedEquilibrium> NashEquilibria2x2(const Game& game);

void CheckShape(const Game& game, int m1, int m2);

}  // namespace eqscope

#endif  // EQSCOPE_CORE_GAME_H_
