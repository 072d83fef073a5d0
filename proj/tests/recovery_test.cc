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

#include "eqscope/recovery/recovery.h"

#include <cmath>
#include <random>
#include <vector>

#include "Eigen/SVD"
#include "eqscope/conic/interior_point.h"
#include "eqscope/conic/simplex.h"
#include "eqscope/core/errors.h"
#include "fixtures.h"
#include "gtest/gtest.h"

namespace eqscope {
namespace {

using testing::MakeIdentifiedFixture;

ObservationSet FromEquilibria(const std::vector<Matrix>& probs) {
  std::vector<Observation> list;
  for (const Matrix& p : probs) {
    Observation o;
    o.equilibrium = CorrelatedEquilibrium(p);
    o.payoff_value = std::array<double, 2>{0.0, 0.0};
    list.push_back(o);
  }
  return ObservationSet(ObservationModel::kPartialPayoff, list);
}

TEST(SelectIndependentSubsetTest, PointMassesGivePermutation) {
  std::vector<Matrix> probs;
  for (int cell : {2, 0, 3, 1}) {
    probs.push_back(CorrelatedEquilibrium::PointMass(2, 2, cell / 2, cell % 2)
                        .probs());
  }
  const ObservationMatrix e = SelectIndependentSubset(FromEquilibria(probs));
  EXPECT_EQ(e.e.rows(), 4);
  EXPECT_FALSE(e.singular);
  EXPECT_NEAR(e.condition, 1.0, 1e-12);
  for (int r = 0; r < 4; ++r) {
    EXPECT_EQ(e.e.row(r).sum(), 1.0);
    EXPECT_EQ(e.e.row(r).maxCoeff(), 1.0);
  }
  EXPECT_NEAR(std::abs(e.e.determinant()), 1.0, 1e-12);
}

TEST(SelectIndependentSubsetTest, RepeatedUniformHasRankOne) {
  const std::vector<Matrix> probs(4, Matrix::Constant(2, 2, 0.25));
  try {
    SelectIndependentSubset(FromEquilibria(probs));
    FAIL() << "expected NotIdentifiableError";
  } catch (const NotIdentifiableError& err) {
    EXPECT_EQ(err.rank(), 1);
  }
}

TEST(SelectIndependentSubsetTest, TooFewObservations) {
  const std::vector<Matrix> probs = {
      CorrelatedEquilibrium::PointMass(2, 2, 0, 0).probs()};
  EXPECT_THROW(SelectIndependentSubset(FromEquilibria(probs)),
               NotIdentifiableError);
}

TEST(SelectIndependentSubsetTest, PicksIndependentRowsAmongDuplicates) {
  std::vector<Matrix> probs;
  for (int cell = 0; cell < 4; ++cell) {
    const Matrix p =
        CorrelatedEquilibrium::PointMass(2, 2, cell / 2, cell % 2).probs();
    probs.push_back(p);
    probs.push_back(p);
  }
  const ObservationMatrix e = SelectIndependentSubset(FromEquilibria(probs));
  EXPECT_EQ(e.rows.size(), 4u);
  EXPECT_NEAR(std::abs(e.e.determinant()), 1.0, 1e-12);
}

TEST(SelectIndependentSubsetTest, Example2IsFullRank) {
  const Example2 ex = Example2Instance(0.1, 1.0);
  const ObservationMatrix e = SelectIndependentSubset(ex.observations);
  EXPECT_FALSE(e.singular);
  Matrix expected = Matrix::Constant(4, 4, (0.75 - 0.1) / 3.0);
  expected.diagonal().setConstant(0.35);
  EXPECT_TRUE(ex.e.isApprox(expected, 1e-15));
  // Rows come back in selection order; compare as a set.
  for (int r = 0; r < 4; ++r) {
    EXPECT_TRUE(e.e.row(r).isApprox(expected.row(e.rows[r]), 1e-15));
  }
}

TEST(InducedNormTest, DiagonalCases) {
  EXPECT_NEAR(InducedNormInverse(Matrix::Identity(4, 4), InducedNorm::kTwo),
              1.0, 1e-8);
  EXPECT_NEAR(
      InducedNormInverse(Matrix::Identity(4, 4), InducedNorm::kInfinity), 1.0,
      1e-15);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 0.5;
  EXPECT_NEAR(InducedNormInverse(d, InducedNorm::kTwo), 2.0, 1e-7);
  EXPECT_NEAR(InducedNormInverse(d, InducedNorm::kInfinity), 2.0, 1e-15);
  EXPECT_THROW(InducedNormInverse(Matrix::Ones(2, 2), InducedNorm::kTwo),
               DomainError);
}

TEST(InducedNormTest, TwoNormMatchesSvd) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = Matrix::NullaryExpr(4, 4, [&] { return normal(rng); });
    Eigen::JacobiSVD<Matrix> svd(m);
    const double oracle =
        1.0 / svd.singularValues()(svd.singularValues().size() - 1);
    EXPECT_NEAR(InducedNormInverse(m, InducedNorm::kTwo), oracle,
                1e-6 * oracle);
  }
}

TEST(InducedNormTest, InfinityNormMatchesSampledSupremum) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> sign(0, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix m = Matrix::NullaryExpr(4, 4, [&] { return normal(rng); });
    const Matrix inv = m.inverse();
    double sup = 0.0;
    for (int s = 0; s < 2000; ++s) {
      Vector x(4);
      for (int i = 0; i < 4; ++i) x(i) = sign(rng) ? 1.0 : -1.0;
      sup = std::max(sup, (inv * x).cwiseAbs().maxCoeff());
    }
    const double norm = InducedNormInverse(m, InducedNorm::kInfinity);
    EXPECT_LE(sup, norm * (1.0 + 1e-12));
    EXPECT_GE(sup, 0.95 * norm);
  }
}

// Inverse of (a - b) I + b J in closed form: (I - b / (a - b + n b) J) /
// (a - b).
TEST(InducedNormTest, Example2ScalesLikeInverseEpsilon) {
  auto oracle = [](double eps) {
    const double a = 0.25 + eps;
    const double b = (0.75 - eps) / 3.0;
    const double c = b / (a - b + 4.0 * b);
    return (std::abs(1.0 - c) + 3.0 * c) / (a - b);
  };
  const double base = 0.1 * oracle(0.1);
  for (double eps : {0.1, 0.05, 0.01}) {
    const Example2 ex = Example2Instance(eps, 1.0);
    const double norm = InducedNormInverse(ex.e, InducedNorm::kInfinity);
    EXPECT_NEAR(norm, oracle(eps), 1e-9 * oracle(eps));
    EXPECT_LE(eps * norm, 4.0 * base);
  }
}

TEST(Example2Test, ClosedForms) {
  const Example2 ex = Example2Instance(0.1, 1.0);
  EXPECT_NEAR(ex.game_distance, 1.0 / 0.56666666666666667, 1e-12);
  EXPECT_NEAR(ex.game_distance, 1.7647058823529411, 1e-12);
  EXPECT_NEAR(ex.rival_distance, 2.0 / 2.6, 1e-12);
  EXPECT_NEAR(ex.gap_closed_form, 10.0 - 1.7647058823529411, 1e-12);
  EXPECT_NEAR(ex.gap_closed_form, 8.235294117647059, 1e-12);
  EXPECT_NEAR(ex.gap, 10.0, 1e-12);
  EXPECT_GE(ex.gap_closed_form, 1.0 * (1.0 / 0.1 - 2.0));
  EXPECT_THROW(Example2Instance(0.3, 1.0), DomainError);
  EXPECT_THROW(Example2Instance(0.1, 0.0), DomainError);
}

TEST(Example2Test, BothExplanationsAreConsistent) {
  for (double eps : {0.2, 0.1, 0.05, 0.02, 0.01}) {
    for (double delta : {0.1, 1.0, 3.0}) {
      const Example2 ex = Example2Instance(eps, delta);
      EXPECT_NEAR(MetricDistance(Metric::kMax, ex.game, ex.perturbed),
                  ex.game_distance, 1e-9);
      EXPECT_NEAR(MetricDistance(Metric::kMax, ex.rival, ex.rival_perturbed),
                  ex.rival_distance, 1e-9);
      EXPECT_NEAR((ex.game.payoff(0) - ex.rival.payoff(0)).cwiseAbs().maxCoeff(),
                  ex.gap, 1e-9);
      for (int k = 0; k < 4; ++k) {
        const Observation& o = ex.observations[k];
        for (const Game* g : {&ex.perturbed[k], &ex.rival_perturbed[k]}) {
          EXPECT_TRUE(IsCorrelatedEquilibrium(*g, o.equilibrium, 1e-12));
          for (int p = 0; p < 2; ++p) {
            EXPECT_NEAR(o.equilibrium.probs().cwiseProduct(g->payoff(p)).sum(),
                        (*o.payoff_value)[p], 1e-9);
          }
        }
      }
    }
  }
}

TEST(Example2Test, BoundIsTightUpToConstant) {
  for (double eps : {0.1, 0.05, 0.02, 0.01}) {
    const Example2 ex = Example2Instance(eps, 1.0);
    const ObservationMatrix e = MakeObservationMatrix(ex.e);
    const double radius = std::max(ex.game_distance, ex.rival_distance);
    const RecoveryBoundCheck check =
        VerifyRecoveryBound(ex.game, ex.rival, e, radius, Metric::kMax);
    EXPECT_TRUE(check.ok);
    EXPECT_GE(check.lhs[0] / check.rhs[0], 0.1) << "eps " << eps;
  }
}

TEST(RecoveryBoundTest, ZeroNoiseRecoversExactly) {
  conic::SimplexBackend simplex;
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    auto f = MakeIdentifiedFixture(rng, 4, 0.0);
    const ObservationMatrix e = SelectIndependentSubset(f.observations);
    const PerturbationResult r =
        MinPerturbation({f.observations, Metric::kMax}, simplex);
    ASSERT_EQ(r.status, conic::SolveStatus::kOptimal);
    const RecoveryBoundCheck check =
        VerifyRecoveryBound(f.game, r.game, e, 0.0, Metric::kMax);
    EXPECT_TRUE(check.ok);
    EXPECT_LE(check.lhs[0], 1e-6);
    EXPECT_LE(check.lhs[1], 1e-6);
  }
}

TEST(RecoveryBoundTest, InfinityBoundHoldsOnSeededFixtures) {
  conic::InteriorPointBackend ipm;
  for (int seed = 0; seed < 40; ++seed) {
    std::mt19937_64 rng(100 + seed);
    auto f =
        testing::MakeIdentifiedFixtureAtRadius(rng, 4, Metric::kMax, 0.05);
    const ObservationMatrix e = SelectIndependentSubset(f.observations);
    const PerturbationResult r =
        MinPerturbation({f.observations, Metric::kMax}, ipm);
    ASSERT_EQ(r.status, conic::SolveStatus::kOptimal) << r.message;
    const RecoveryBoundCheck check =
        VerifyRecoveryBound(f.game, r.game, e, 0.05, Metric::kMax);
    EXPECT_TRUE(check.ok) << "seed " << seed;
    EXPECT_TRUE(check.direct_ok);
  }
}

TEST(RecoveryBoundTest, SquaredNormDirectBoundHoldsOnSeededFixtures) {
  conic::InteriorPointBackend ipm;
  for (int seed = 0; seed < 40; ++seed) {
    std::mt19937_64 rng(100 + seed);
    auto f = testing::MakeIdentifiedFixtureAtRadius(rng, 4,
                                                    Metric::kSumOfSquares, 0.01);
    const ObservationMatrix e = SelectIndependentSubset(f.observations);
    const PerturbationResult r =
        MinPerturbation({f.observations, Metric::kSumOfSquares}, ipm);
    ASSERT_EQ(r.status, conic::SolveStatus::kOptimal) << r.message;
    const RecoveryBoundCheck check =
        VerifyRecoveryBound(f.game, r.game, e, 0.01, Metric::kSumOfSquares);
    EXPECT_TRUE(check.direct_ok) << "seed " << seed;
    EXPECT_LE(check.rhs[0], check.direct_rhs + 1e-12);
  }
}

// With an ill-conditioned E the square-root form is exceeded: seed 149
// (||E^-1||_2 ~ 119) recovers a game 1.76 away against a bound of 1.54.
TEST(RecoveryBoundTest, SquaredNormSquareRootFormCounterexample) {
  conic::InteriorPointBackend ipm;
  std::mt19937_64 rng(149);
  auto f = testing::MakeIdentifiedFixtureAtRadius(rng, 4,
                                                  Metric::kSumOfSquares, 0.01);
  const ObservationMatrix e = SelectIndependentSubset(f.observations);
  const PerturbationResult r =
      MinPerturbation({f.observations, Metric::kSumOfSquares}, ipm);
  ASSERT_EQ(r.status, conic::SolveStatus::kOptimal);
  const RecoveryBoundCheck check =
      VerifyRecoveryBound(f.game, r.game, e, 0.01, Metric::kSumOfSquares);
  EXPECT_FALSE(check.ok);
  EXPECT_TRUE(check.direct_ok);
  EXPECT_GT(std::max(check.lhs[0], check.lhs[1]), check.rhs[0] + 0.1);
}

TEST(SparseSupportTest, UnobservedEntriesSitBelowObserved) {
  conic::SimplexBackend simplex;
  Matrix a(2, 2), b(2, 2);
  a << 2.0, 1.0, 0.0, 0.5;
  b << 1.0, 0.0, 3.0, 0.5;
  const Game game(a, b);
  // Only (0,0) and (1,1) are ever played.
  std::vector<Observation> list = {
      testing::PayoffObservation(game,
                                 CorrelatedEquilibrium::PointMass(2, 2, 0, 0)),
      testing::PayoffObservation(game,
                                 CorrelatedEquilibrium::PointMass(2, 2, 1, 1))};
  ConsistencyInstance inst{
      ObservationSet(ObservationModel::kPartialPayoff, list), Metric::kMax};
  const SparseRecovery r = SparseSupportRecovery(inst, simplex);
  ASSERT_EQ(r.result.status, conic::SolveStatus::kOptimal);
  EXPECT_NEAR(r.result.delta_star, 0.0, 1e-9);
  EXPECT_EQ(r.observed(0, 1), 0.0);
  EXPECT_EQ(r.observed(1, 1), 1.0);
  for (int p = 0; p < 2; ++p) {
    const Matrix& g = r.result.game.payoff(p);
    const double lowest_observed = std::min(g(0, 0), g(1, 1));
    EXPECT_LE(std::max(g(0, 1), g(1, 0)), lowest_observed - 1.0 + 1e-9);
    EXPECT_NEAR(g(0, 0), game.payoff(p)(0, 0), 1e-9);
    EXPECT_NEAR(g(1, 1), game.payoff(p)(1, 1), 1e-9);
    for (const Game& gk : r.result.perturbed) {
      EXPECT_NEAR(gk.payoff(p)(0, 1), g(0, 1), 1e-9);
    }
  }
  for (int k = 0; k < 2; ++k) {
    EXPECT_TRUE(IsCorrelatedEquilibrium(r.result.perturbed[k],
                                        list[k].equilibrium, 1e-9));
  }
}

}  // namespace
}  // namespace eqscope
