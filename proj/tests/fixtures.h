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

#ifndef EQSCOPE_TESTS_FIXTURES_H_
#define EQSCOPE_TESTS_FIXTURES_H_

#include <cmath>
#include <random>
#include <vector>

#include "eqscope/core/game.h"

namespace eqscope::testing {

inline Game RandomGame(std::mt19937_64& rng, int m1, int m2,
                       double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix a(m1, m2), b(m1, m2);
  for (int i = 0; i < m1; ++i) {
    for (int j = 0; j < m2; ++j) {
      a(i, j) = normal(rng);
      b(i, j) = normal(rng);
    }
  }
  return Game(a, b);
}

// 2x2 anti-coordination game: each player prefers to mismatch, so the CE
// polytope has nonempty interior.
inline Game RandomChickenGame(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> gap(0.5, 1.5);
  std::normal_distribution<double> base(0.0, 1.0);
  Matrix a(2, 2), b(2, 2);
  const double a0 = base(rng), a1 = base(rng);
  a << a0, a1, a0 + gap(rng), a1 - gap(rng);
  const double b0 = base(rng), b1 = base(rng);
  b << b0, b0 + gap(rng), b1, b1 - gap(rng);
  return Game(a, b);
}

// A random point of the CE polytope: Dirichlet weights over its vertices.
inline CorrelatedEquilibrium RandomInteriorEquilibrium(std::mt19937_64& rng,
                                                       const Game& game) {
  const std::vector<CorrelatedEquilibrium> vertices =
      EnumerateCeVertices(game);
  std::exponential_distribution<double> expo(1.0);
  Matrix probs = Matrix::Zero(game.m1(), game.m2());
  double total = 0.0;
  for (const CorrelatedEquilibrium& v : vertices) {
    const double w = expo(rng);
    probs += w * v.probs();
    total += w;
  }
  return CorrelatedEquilibrium(probs / total);
}

// Picks a correlated equilibrium of `game`: a vertex of its CE polytope, or
// a random convex combination of two vertices.
inline CorrelatedEquilibrium RandomEquilibrium(std::mt19937_64& rng,
                                               const Game& game) {
  const std::vector<CorrelatedEquilibrium> vertices =
      EnumerateCeVertices(game);
  std::uniform_int_distribution<size_t> pick(0, vertices.size() - 1);
  const CorrelatedEquilibrium& a = vertices[pick(rng)];
  const CorrelatedEquilibrium& b = vertices[pick(rng)];
  const double w = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return CorrelatedEquilibrium(w * a.probs() + (1.0 - w) * b.probs());
}

inline Observation PayoffObservation(const Game& game,
                                     const CorrelatedEquilibrium& e) {
  Observation obs;
  obs.equilibrium = e;
  obs.payoff_value = std::array<double, 2>{
      (e.probs().cwiseProduct(game.payoff(0))).sum(),
      (e.probs().cwiseProduct(game.payoff(1))).sum()};
  return obs;
}

// l equilibria of perturbations G^k = G + noise, with the realized values.
struct NoisyFixture {
  Game game;
  std::vector<Game> perturbed;
  ObservationSet observations;
};

inline NoisyFixture MakePartialPayoffFixture(std::mt19937_64& rng, int m1,
                                             int m2, int l, double noise) {
  NoisyFixture f;
  f.game = RandomGame(rng, m1, m2);
  std::vector<Observation> list;
  for (int k = 0; k < l; ++k) {
    Game gk = noise > 0.0 ? f.game + RandomGame(rng, m1, m2, noise) : f.game;
    list.push_back(PayoffObservation(gk, RandomEquilibrium(rng, gk)));
    f.perturbed.push_back(std::move(gk));
  }
  f.observations =
      ObservationSet(ObservationModel::kPartialPayoff, std::move(list));
  return f;
}

// 2x2 chicken-type generator whose l observed equilibria are interior
// points, so the observation matrix has full rank with probability one.
inline NoisyFixture MakeIdentifiedFixture(std::mt19937_64& rng, int l,
                                          double noise) {
  NoisyFixture f;
  f.game = RandomChickenGame(rng);
  std::vector<Observation> list;
  for (int k = 0; k < l; ++k) {
    Game gk = noise > 0.0 ? f.game + RandomGame(rng, 2, 2, noise) : f.game;
    list.push_back(PayoffObservation(gk, RandomInteriorEquilibrium(rng, gk)));
    f.perturbed.push_back(std::move(gk));
  }
  f.observations =
      ObservationSet(ObservationModel::kPartialPayoff, std::move(list));
  return f;
}

// As above, with the perturbations G^k - G rescaled so that their metric
// distance is exactly `delta` before the equilibria are drawn.
inline NoisyFixture MakeIdentifiedFixtureAtRadius(std::mt19937_64& rng, int l,
                                                  Metric metric,
                                                  double delta) {
  NoisyFixture f;
  f.game = RandomChickenGame(rng);
  std::vector<Game> noise;
  for (int k = 0; k < l; ++k) noise.push_back(RandomGame(rng, 2, 2));
  const double d = MetricDistance(metric, Game::Zero(2, 2), noise);
  const double s =
      metric == Metric::kSumOfSquares ? std::sqrt(delta / d) : delta / d;
  std::vector<Observation> list;
  for (int k = 0; k < l; ++k) {
    Game gk(f.game.payoff(0) + s * noise[k].payoff(0),
            f.game.payoff(1) + s * noise[k].payoff(1));
    list.push_back(PayoffObservation(gk, RandomInteriorEquilibrium(rng, gk)));
    f.perturbed.push_back(std::move(gk));
  }
  f.observations =
      ObservationSet(ObservationModel::kPartialPayoff, std::move(list));
  return f;
}

}  // namespace eqscope::testing

#endif  // EQSCOPE_TESTS_FIXTURES_H_
