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

#include <cmath>
#include <random>
#include <vector>

#include "eqscope/conic/interior_point.h"
#include "eqscope/conic/simplex.h"
#include "eqscope/core/errors.h"
#include "fixtures.h"
#include "gtest/gtest.h"

namespace eqscope {
namespace {

ObservationSet NoPayoff(const std::vector<Matrix>& probs) {
  std::vector<Observation> list;
  for (const Matrix& p : probs) {
    Observation o;
    o.equilibrium = CorrelatedEquilibrium(p);
    list.push_back(o);
  }
  return ObservationSet(ObservationModel::kNoPayoff, list);
}

ObservationSet PointMassFixture() {
  return NoPayoff({CorrelatedEquilibrium::PointMass(2, 2, 0, 0).probs()});
}

// Closed form for the point-mass fixture: the deviation gap
// G^k(0,0) - G^k(1,0) = eps costs nothing up to 1 and (eps - 1)^2 / 2 after.
double PointMassOracle(double eps) {
  return eps <= 1.0 ? 0.0 : 0.5 * (eps - 1.0) * (eps - 1.0);
}

TEST(TildeVectorTest, PointMass) {
  const auto vs =
      BuildTildeVectors(CorrelatedEquilibrium::PointMass(2, 2, 0, 0));
  ASSERT_EQ(vs.size(), 2u);
  EXPECT_EQ(vs[0].i, 0);
  EXPECT_EQ(vs[0].ip, 1);
  Matrix expected(2, 2);
  expected << -1, 0, 1, 0;
  EXPECT_EQ(vs[0].v, expected);
  EXPECT_TRUE(vs[1].IsZero());
}

TEST(TildeVectorTest, MatchesRowPlayerConditions) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Game game = testing::RandomGame(rng, 3, 3);
    Matrix p = Matrix::NullaryExpr(3, 3, [&] { return unit(rng); });
    const CorrelatedEquilibrium e(p / p.sum());
    bool rows_ok = true;
    for (const TildeVector& t : BuildTildeVectors(e)) {
      rows_ok = rows_ok && t.v.cwiseProduct(game.payoff(0)).sum() <= 0.0;
    }
    // Row conditions only: zero out the column player's incentives.
    const Game row_only(game.payoff(0), Matrix::Zero(3, 3));
    EXPECT_EQ(rows_ok, IsCorrelatedEquilibrium(row_only, e, 0.0));
  }
}

TEST(TildeVectorTest, UniformPairsCancel) {
  std::mt19937_64 rng(2);
  const auto vs = BuildTildeVectors(
      CorrelatedEquilibrium(Matrix::Constant(2, 2, 0.25)));
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix g = testing::RandomGame(rng, 2, 2).payoff(0);
    double total = 0.0;
    for (const TildeVector& t : vs) total += t.v.cwiseProduct(g).sum();
    EXPECT_NEAR(total, 0.0, 1e-15);
  }
}

class DegeneracyBackendTest : public ::testing::TestWithParam<bool> {
 protected:
  const conic::Backend& backend() const {
    if (GetParam()) return ipm_;
    return simplex_;
  }
  conic::InteriorPointBackend ipm_;
  conic::SimplexBackend simplex_;
};

TEST_P(DegeneracyBackendTest, Thresholds) {
  EXPECT_NEAR(DegeneracyThreshold(PointMassFixture(), backend()), 1.0, 1e-7);
  EXPECT_NEAR(DegeneracyThreshold(NoPayoff({Matrix::Constant(2, 2, 0.25)}),
                                  backend()),
              0.0, 1e-7);
}

INSTANTIATE_TEST_SUITE_P(Backends, DegeneracyBackendTest, ::testing::Bool(),
                         [](const auto& info) {
                           return info.param ? "InteriorPoint" : "Simplex";
                         });

TEST(StrictnessTest, PointMassCurve) {
  conic::InteriorPointBackend ipm;
  const ObservationSet obs = PointMassFixture();
  for (double eps : {0.0, 0.5, 0.999999, 1.001, 1.5, 2.0, 3.0}) {
    const StrictnessResult r = SolveStrictness(obs, eps, ipm);
    ASSERT_EQ(r.status, conic::SolveStatus::kOptimal) << eps << r.message;
    EXPECT_NEAR(r.value, PointMassOracle(eps), 1e-8) << "eps " << eps;
  }
  EXPECT_GT(SolveStrictness(obs, 1.001, ipm).value, 0.0);
  EXPECT_GT(SolveStrictness(obs, 2.0, ipm).value, 0.0);
}

TEST(StrictnessTest, WitnessIsFeasible) {
  conic::InteriorPointBackend ipm;
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const Game game = testing::RandomChickenGame(rng);
    const ObservationSet obs =
        NoPayoff({testing::RandomInteriorEquilibrium(rng, game).probs(),
                  testing::RandomInteriorEquilibrium(rng, game).probs()});
    const double eps = 0.3;
    const StrictnessResult r = SolveStrictness(obs, eps, ipm);
    ASSERT_EQ(r.status, conic::SolveStatus::kOptimal);
    EXPECT_GE(r.game.minCoeff(), -1e-7);
    EXPECT_LE(r.game.maxCoeff(), 1.0 + 1e-7);
    double total = 0.0;
    double squares = 0.0;
    for (int k = 0; k < obs.size(); ++k) {
      size_t s = 0;
      for (const TildeVector& t : BuildTildeVectors(obs[k].equilibrium)) {
        if (t.IsZero()) continue;
        const double slack = r.slack[k][s++];
        EXPECT_GE(slack, -1e-7);
        EXPECT_NEAR(t.v.cwiseProduct(r.perturbed[k]).sum(), -slack, 1e-7);
        total += slack;
      }
      squares += (r.perturbed[k] - r.game).squaredNorm();
    }
    EXPECT_NEAR(total, eps, 1e-7);
    EXPECT_NEAR(squares, r.value, 1e-7);
  }
}

TEST(StrictnessTest, ConvexAndNondecreasing) {
  conic::InteriorPointBackend ipm;
  std::mt19937_64 rng(4);
  const Game game = testing::RandomChickenGame(rng);
  const ObservationSet obs =
      NoPayoff({testing::RandomInteriorEquilibrium(rng, game).probs(),
                testing::RandomInteriorEquilibrium(rng, game).probs()});
  const double star = DegeneracyThreshold(obs, ipm);
  std::vector<double> grid;
  std::vector<double> values;
  for (int s = 0; s <= 8; ++s) {
    grid.push_back(star * (1.0 + 0.25 * s));
    values.push_back(SolveStrictness(obs, grid.back(), ipm).value);
  }
  for (size_t s = 1; s < values.size(); ++s) {
    EXPECT_GE(values[s], values[s - 1] - 1e-7);
  }
  for (size_t s = 0; s + 2 < values.size(); ++s) {
    EXPECT_LE(values[s + 1], 0.5 * (values[s] + values[s + 2]) + 1e-6);
  }
  EXPECT_LE(SolveStrictness(obs, star * (1.0 - 1e-6), ipm).value, 1e-8);
  EXPECT_GT(SolveStrictness(obs, star * (1.0 + 1e-3), ipm).value, 0.0);
}

TEST(StrictnessTest, StrongDualityUnderSlater) {
  conic::InteriorPointBackend ipm;
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const Game game = testing::RandomChickenGame(rng);
    const ObservationSet obs =
        NoPayoff({testing::RandomInteriorEquilibrium(rng, game).probs()});
    ASSERT_TRUE(CheckSlater(obs)[0]);
    const double star = DegeneracyThreshold(obs, ipm);
    const StrictnessResult r = SolveStrictness(obs, 2.0 * star + 0.1, ipm);
    ASSERT_EQ(r.status, conic::SolveStatus::kOptimal);
    EXPECT_NEAR(r.dual_value, r.value, 1e-5 * std::max(1.0, r.value));
  }
}

TEST(SlaterTest, Cases) {
  Matrix proportional(2, 2);
  proportional << 0.1, 0.2, 0.233333333333333333, 0.466666666666666667;
  proportional /= proportional.sum();
  Matrix three(3, 2);
  three << 0.2, 0.1, 0.0, 0.0, 0.3, 0.4;
  const ObservationSet obs =
      NoPayoff({CorrelatedEquilibrium::PointMass(2, 2, 1, 0).probs(),
                proportional});
  const std::vector<bool> s = CheckSlater(obs);
  EXPECT_TRUE(s[0]);
  EXPECT_FALSE(s[1]);
  EXPECT_TRUE(CheckSlater(NoPayoff({three}))[0]);
  EXPECT_TRUE(CheckSlater(NoPayoff({three}), 1)[0]);
}

TEST(SlaterTest, GenericInteriorEquilibria) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Game game = testing::RandomChickenGame(rng);
    const ObservationSet obs =
        NoPayoff({testing::RandomInteriorEquilibrium(rng, game).probs()});
    EXPECT_TRUE(CheckSlater(obs)[0]);
    EXPECT_TRUE(CheckSlater(obs, 1)[0]);
  }
}

TEST(EnvelopeTest, SinglePointIsTrivial) {
  conic::InteriorPointBackend ipm;
  const EnvelopeReport r = EnvelopeCheck(PointMassFixture(), 1.5, {1.5}, ipm);
  EXPECT_TRUE(r.ok);
  EXPECT_NEAR(r.lower[0], r.p0, 1e-12);
  EXPECT_NEAR(r.upper[0], r.p0, 1e-12);
}

TEST(EnvelopeTest, PointMassGrid) {
  conic::InteriorPointBackend ipm;
  const EnvelopeReport r =
      EnvelopeCheck(PointMassFixture(), 1.5, {1.5, 2.0, 3.0}, ipm);
  EXPECT_TRUE(r.ok);
  EXPECT_TRUE(r.monotone);
  EXPECT_NEAR(r.p0, 0.125, 1e-8);
  // l = 1, m = 2: c = 1.
  EXPECT_NEAR(r.upper[2], std::pow((std::sqrt(0.125) + 1.0) * 2.0 - 1.0, 2),
              1e-8);
  EXPECT_NEAR(r.lower[1], 0.125 * 4.0 / 2.25, 1e-8);
}

TEST(EnvelopeTest, RejectsZeroBase) {
  conic::InteriorPointBackend ipm;
  EXPECT_THROW(EnvelopeCheck(PointMassFixture(), 0.5, {0.5}, ipm),
               DomainError);
}

TEST(PaddingTest, ZeroColumnsLeaveCurveUnchanged) {
  conic::InteriorPointBackend ipm;
  Matrix p(3, 2);
  p << 0.3, 0.1, 0.2, 0.1, 0.05, 0.25;
  const ObservationSet obs = NoPayoff({p});
  const auto view = PlayerView(obs, 0);
  const auto padded = PadColumns(view);
  ASSERT_EQ(padded[0].m2(), 3);
  EXPECT_NEAR(DegeneracyThreshold(view, ipm),
              DegeneracyThreshold(padded, ipm), 1e-7);
  for (double eps : {0.2, 1.0, 2.5}) {
    EXPECT_NEAR(SolveStrictness(view, eps, ipm).value,
                SolveStrictness(padded, eps, ipm).value, 1e-7);
  }
}

TEST(PlayerTest, ColumnPlayerByTransposition) {
  conic::InteriorPointBackend ipm;
  // Point mass on (0, 0): the column player's only nonvacuous deviation is
  // column 0 -> 1, the same structure as the row player's.
  const ObservationSet obs = PointMassFixture();
  EXPECT_NEAR(DegeneracyThreshold(obs, ipm, 1), 1.0, 1e-7);
  Matrix p(2, 3);
  p << 0.1, 0.2, 0.3, 0.15, 0.05, 0.2;
  const ObservationSet wide = NoPayoff({p});
  const std::vector<CorrelatedEquilibrium> transposed = {
      CorrelatedEquilibrium(Matrix(p.transpose()))};
  EXPECT_NEAR(DegeneracyThreshold(wide, ipm, 1),
              DegeneracyThreshold(transposed, ipm), 1e-9);
}

TEST(DegeneracyErrorsTest, NeedsNoPayoffModel) {
  conic::InteriorPointBackend ipm;
  Observation o;
  o.equilibrium = CorrelatedEquilibrium::PointMass(2, 2, 0, 0);
  o.payoff_value = std::array<double, 2>{0.0, 0.0};
  const ObservationSet obs(ObservationModel::kPartialPayoff, {o});
  EXPECT_THROW(DegeneracyThreshold(obs, ipm), ModelError);
  EXPECT_THROW(SolveStrictness(PointMassFixture(), -1.0, ipm), DomainError);
}

}  // namespace
}  // namespace eqscope
