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

#include "eqscope/consistency/consistency.h"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "eqscope/conic/interior_point.h"
#include "eqscope/conic/simplex.h"
#include "eqscope/core/errors.h"
#include "fixtures.h"
#include "gtest/gtest.h"

namespace eqscope {
namespace {

using conic::LinExpr;
using conic::Program;
using conic::Relation;
using conic::SolveStatus;
using testing::MakePartialPayoffFixture;
using testing::PayoffObservation;
using testing::RandomEquilibrium;
using testing::RandomGame;

// Value of the expression at the given game, with the variables of `vars`
// occupying the first columns.
double EvaluateAt(const LinExpr& expr, const GameVariables& vars,
                  const Game& g, int num_scalars) {
  std::vector<double> x(num_scalars, 0.0);
  for (int p = 0; p < 2; ++p) {
    for (int i = 0; i < g.m1(); ++i) {
      for (int j = 0; j < g.m2(); ++j) {
        x[vars.payoff[p].index(i, j)] = g.payoff(p)(i, j);
      }
    }
  }
  return expr.Evaluate(x);
}

ObservationSet SinglePartial(const CorrelatedEquilibrium& e, double v1,
                             double v2) {
  Observation obs;
  obs.equilibrium = e;
  obs.payoff_value = std::array<double, 2>{v1, v2};
  return ObservationSet(ObservationModel::kPartialPayoff, {obs});
}

TEST(EquilibriumConstraintsTest, CountsDeviationPairs) {
  Program program;
  const GameVariables g = AddGameVariables(program, 2, 2, "G");
  const CorrelatedEquilibrium e(Matrix::Constant(2, 2, 0.25));
  EXPECT_EQ(BuildEquilibriumConstraints(program, g, e), 4);
  EXPECT_EQ(program.linear().size(), 4u);

  Program p3;
  const GameVariables g3 = AddGameVariables(p3, 3, 4, "G");
  EXPECT_EQ(BuildEquilibriumConstraints(
                p3, g3, CorrelatedEquilibrium(Matrix::Constant(3, 4, 1.0 / 12))),
            3 * 2 + 4 * 3);
}

TEST(EquilibriumConstraintsTest, PointMassLeavesTwoNonvacuousRows) {
  Program program;
  const GameVariables g = AddGameVariables(program, 2, 2, "G");
  const auto e = CorrelatedEquilibrium::PointMass(2, 2, 0, 0);
  ASSERT_EQ(BuildEquilibriumConstraints(program, g, e), 4);
  const auto& rows = program.linear();
  // Row player, i=0 vs 1: G1(0,0) - G1(1,0) >= 0.
  EXPECT_EQ(rows[0].expr, g(0, 0, 0) - g(0, 1, 0));
  EXPECT_EQ(rows[0].relation, Relation::kGreaterEqual);
  EXPECT_TRUE(rows[1].expr.IsConstant());
  // Column player, j=0 vs 1: G2(0,0) - G2(0,1) >= 0.
  EXPECT_EQ(rows[2].expr, g(1, 0, 0) - g(1, 0, 1));
  EXPECT_TRUE(rows[3].expr.IsConstant());

  Program dropped;
  const GameVariables gd = AddGameVariables(dropped, 2, 2, "G");
  EXPECT_EQ(BuildEquilibriumConstraints(dropped, gd, e, true), 2);
}

TEST(EquilibriumConstraintsTest, UniformRowConstraint) {
  Program program;
  const GameVariables g = AddGameVariables(program, 2, 2, "G");
  BuildEquilibriumConstraints(program, g,
                              CorrelatedEquilibrium(Matrix::Constant(2, 2, 0.25)));
  const LinExpr expected = 0.25 * (g(0, 0, 0) + g(0, 0, 1)) -
                           0.25 * (g(0, 1, 0) + g(0, 1, 1));
  EXPECT_EQ(program.linear()[0].expr, expected);
}

TEST(EquilibriumConstraintsTest, ShapeMismatchThrows) {
  Program program;
  const GameVariables g = AddGameVariables(program, 2, 2, "G");
  EXPECT_THROW(BuildEquilibriumConstraints(
                   program, g, CorrelatedEquilibrium::PointMass(2, 3, 0, 0)),
               ShapeError);
}

TEST(EquilibriumConstraintsTest, AgreesWithCorrelatedEquilibriumCheck) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Game game = RandomGame(rng, 3, 2);
    const CorrelatedEquilibrium e(
        [&] {
          Matrix m = Matrix::NullaryExpr(3, 2, [&] {
            return std::uniform_real_distribution<double>(0, 1)(rng);
          });
          return Matrix(m / m.sum());
        }());
    Program program;
    const GameVariables g = AddGameVariables(program, 3, 2, "G");
    BuildEquilibriumConstraints(program, g, e);
    bool all = true;
    for (const auto& row : program.linear()) {
      all = all &&
            EvaluateAt(row.expr, g, game, program.num_scalars()) >= -1e-12;
    }
    EXPECT_EQ(all, IsCorrelatedEquilibrium(game, e));
  }
}

TEST(MetricConstraintTest, Counts) {
  const auto e = CorrelatedEquilibrium::PointMass(2, 2, 0, 0);
  const ObservationSet obs = SinglePartial(e, 0, 0);
  Program program;
  const GameVariables g = AddGameVariables(program, 2, 2, "G");
  const std::vector<GameVariables> gk = {AddGameVariables(program, 2, 2, "K")};
  EXPECT_EQ(BuildMetricConstraint(program, g, gk, Metric::kMax, 0.5, obs), 16);
  EXPECT_EQ(program.linear().size(), 16u);
  EXPECT_EQ(BuildMetricConstraint(program, g, gk, Metric::kSumOfSquares, 0.5,
                                  obs),
            1);
  EXPECT_EQ(program.squared_norm().size(), 1u);
  EXPECT_EQ(program.squared_norm()[0].x.size(), 8u);
}

TEST(MetricConstraintTest, ZeroRadiusBecomesEqualities) {
  const ObservationSet obs =
      SinglePartial(CorrelatedEquilibrium::PointMass(2, 2, 0, 0), 0, 0);
  Program program;
  const GameVariables g = AddGameVariables(program, 2, 2, "G");
  const std::vector<GameVariables> gk = {AddGameVariables(program, 2, 2, "K")};
  EXPECT_EQ(BuildMetricConstraint(program, g, gk, Metric::kMax, 0.0, obs), 8);
  for (const auto& row : program.linear()) {
    EXPECT_EQ(row.relation, Relation::kEqual);
  }
}

TEST(MetricConstraintTest, ShifterIsSubtracted) {
  Observation o;
  o.equilibrium = CorrelatedEquilibrium::PointMass(2, 2, 0, 0);
  Matrix b1(2, 2), b2(2, 2);
  b1 << 1, 2, 3, 4;
  b2 << -1, -2, -3, -4;
  o.shifter = Game(b1, b2);
  const ObservationSet obs(ObservationModel::kPayoffShifter, {o});
  Program program;
  const GameVariables g = AddGameVariables(program, 2, 2, "G");
  const std::vector<GameVariables> gk = {AddGameVariables(program, 2, 2, "K")};
  BuildMetricConstraint(program, g, gk, Metric::kMax, 0.5, obs);
  // Upper side of entry (p=0, i=1, j=0): K1(1,0) - G1(1,0) - 3 - 0.5 <= 0.
  const auto& row = program.linear()[2 * 2];
  EXPECT_EQ(row.expr, gk[0](0, 1, 0) - g(0, 1, 0) - LinExpr(3.5));
  EXPECT_EQ(row.relation, Relation::kLessEqual);
  const std::string text = program.ToText();
  EXPECT_NE(text.find("[ -3.5 2 "), std::string::npos);
}

TEST(PayoffInfoTest, CountsAndSubstitution) {
  std::vector<Observation> list;
  for (int k = 0; k < 3; ++k) {
    list.push_back(PayoffObservation(
        Game::Zero(2, 2), CorrelatedEquilibrium::PointMass(2, 2, 0, 0)));
  }
  const ObservationSet obs(ObservationModel::kPartialPayoff, list);
  Program program;
  std::vector<GameVariables> gk;
  for (int k = 0; k < 3; ++k) {
    gk.push_back(AddGameVariables(program, 2, 2, "K" + std::to_string(k)));
  }
  EXPECT_EQ(BuildPayoffInfoConstraints(program, gk, obs), 6);

  Program single;
  const std::vector<GameVariables> one = {AddGameVariables(single, 2, 2, "K")};
  BuildPayoffInfoConstraints(
      single, one,
      SinglePartial(CorrelatedEquilibrium::PointMass(2, 2, 0, 0), 7, 0));
  EXPECT_EQ(single.linear()[0].expr, one[0](0, 0, 0) - LinExpr(7.0));
  EXPECT_EQ(single.linear()[0].relation, Relation::kEqual);

  Program uniform;
  const std::vector<GameVariables> u = {AddGameVariables(uniform, 2, 2, "K")};
  BuildPayoffInfoConstraints(
      uniform, u,
      SinglePartial(CorrelatedEquilibrium(Matrix::Constant(2, 2, 0.25)), 0, 0));
  EXPECT_EQ(uniform.linear()[0].expr,
            0.25 * (u[0](0, 0, 0) + u[0](0, 0, 1) + u[0](0, 1, 0) +
                    u[0](0, 1, 1)));
}

TEST(PayoffInfoTest, WrongModelThrows) {
  Observation o;
  o.equilibrium = CorrelatedEquilibrium::PointMass(2, 2, 0, 0);
  const ObservationSet obs(ObservationModel::kNoPayoff, {o});
  Program program;
  const std::vector<GameVariables> gk = {AddGameVariables(program, 2, 2, "K")};
  EXPECT_THROW(BuildPayoffInfoConstraints(program, gk, obs), ModelError);
}

TEST(AttachPropertyTest, Counts) {
  Program program;
  const GameVariables g = AddGameVariables(program, 2, 2, "G");
  EXPECT_EQ(AttachProperty(program, ZeroSum{}, g), 4);
  const int before = program.num_scalars();
  EXPECT_EQ(AttachProperty(program, ExactPotential{}, g), 8);
  EXPECT_EQ(program.num_scalars() - before, 4);
  EXPECT_EQ(AttachProperty(program, EpsZeroSum{0.5}, g), 2 * 4 + 1);

  LinearParam lp;
  lp.offset = {Matrix::Zero(2, 2), Matrix::Zero(2, 2)};
  lp.basis[0] = {Matrix::Ones(2, 2), Matrix::Identity(2, 2)};
  lp.basis[1] = {Matrix::Zero(2, 2), Matrix::Ones(2, 2)};
  lp.pinned = {std::nullopt, 3.0};
  const int vars_before = program.num_scalars();
  EXPECT_EQ(AttachProperty(program, lp, g), 2 * 4 + 1);
  EXPECT_EQ(program.num_scalars() - vars_before, 2);
}

class ConsistencyQueryTest : public ::testing::TestWithParam<bool> {
 protected:
  const conic::Backend& backend() const {
    if (GetParam()) return ipm_;
    return simplex_;
  }
  conic::InteriorPointBackend ipm_;
  conic::SimplexBackend simplex_;
};

TEST_P(ConsistencyQueryTest, GeneratorIsMemberAtZeroRadius) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = MakePartialPayoffFixture(rng, 2, 3, 3, 0.0);
    ConsistencyInstance inst{f.observations, Metric::kMax, 0.0};
    EXPECT_TRUE(Membership(f.game, inst, backend()));
  }
}

TEST_P(ConsistencyQueryTest, ConstantGameConsistentWithAnything) {
  std::mt19937_64 rng(4);
  std::vector<Observation> list;
  for (int k = 0; k < 4; ++k) {
    Observation o;
    o.equilibrium = RandomEquilibrium(rng, RandomGame(rng, 3, 3));
    list.push_back(o);
  }
  ConsistencyInstance inst{ObservationSet(ObservationModel::kNoPayoff, list),
                           Metric::kMax, 0.0};
  EXPECT_TRUE(Membership(Game(Matrix::Constant(3, 3, 2.0),
                              Matrix::Constant(3, 3, -1.0)),
                         inst, backend()));
}

TEST_P(ConsistencyQueryTest, PayoffConflictIsNotMember) {
  ConsistencyInstance inst{
      SinglePartial(CorrelatedEquilibrium::PointMass(2, 2, 0, 0), 1, 0),
      Metric::kMax, 0.0};
  EXPECT_FALSE(Membership(Game::Zero(2, 2), inst, backend()));
  inst.delta = 1.0;
  EXPECT_TRUE(Membership(Game::Zero(2, 2), inst, backend()));
}

TEST_P(ConsistencyQueryTest, NoiselessObservationsGiveZeroDelta) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = MakePartialPayoffFixture(rng, 2, 2, 2, 0.0);
    ConsistencyInstance inst{f.observations, Metric::kMax};
    const PerturbationResult r = MinPerturbation(inst, backend());
    ASSERT_EQ(r.status, SolveStatus::kOptimal) << r.message;
    EXPECT_NEAR(r.delta_star, 0.0, 1e-7);
    for (int k = 0; k < f.observations.size(); ++k) {
      const Observation& o = f.observations[k];
      for (int p = 0; p < 2; ++p) {
        EXPECT_NEAR(o.equilibrium.probs().cwiseProduct(r.game.payoff(p)).sum(),
                    (*o.payoff_value)[p], 1e-6);
      }
    }
  }
}

TEST_P(ConsistencyQueryTest, ExactShiftersGiveZeroDelta) {
  std::mt19937_64 rng(6);
  const Game game = RandomGame(rng, 2, 3);
  std::vector<Observation> list;
  for (int k = 0; k < 3; ++k) {
    const Game gk = game + RandomGame(rng, 2, 3, 0.5);
    Observation o;
    o.equilibrium = RandomEquilibrium(rng, gk);
    o.shifter = gk - game;
    list.push_back(o);
  }
  ConsistencyInstance inst{
      ObservationSet(ObservationModel::kPayoffShifter, list), Metric::kMax};
  const PerturbationResult r = MinPerturbation(inst, backend());
  ASSERT_EQ(r.status, SolveStatus::kOptimal) << r.message;
  EXPECT_NEAR(r.delta_star, 0.0, 1e-7);
}

TEST_P(ConsistencyQueryTest, WitnessIsSound) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = MakePartialPayoffFixture(rng, 3, 2, 3, 0.3);
    ConsistencyInstance inst{f.observations, Metric::kMax};
    const PerturbationResult r = MinPerturbation(inst, backend());
    ASSERT_EQ(r.status, SolveStatus::kOptimal) << r.message;
    EXPECT_LE(MetricDistance(Metric::kMax, r.game, r.perturbed),
              r.delta_star + 1e-6);
    // The generator is a witness, so the optimum is at most its distance.
    EXPECT_LE(r.delta_star,
              MetricDistance(Metric::kMax, f.game, f.perturbed) + 1e-6);
    for (int k = 0; k < f.observations.size(); ++k) {
      EXPECT_LE(EquilibriumViolation(r.perturbed[k],
                                     f.observations[k].equilibrium),
                1e-6);
    }
  }
}

TEST_P(ConsistencyQueryTest, ZeroSumThreshold) {
  std::mt19937_64 rng(8);
  Matrix a = RandomGame(rng, 2, 2).payoff(0);
  const Game zero_sum(a, -a);
  std::vector<Observation> list;
  for (int k = 0; k < 2; ++k) {
    list.push_back(
        PayoffObservation(zero_sum, RandomEquilibrium(rng, zero_sum)));
  }
  ConsistencyInstance inst{
      ObservationSet(ObservationModel::kPartialPayoff, list), Metric::kMax};
  const auto family = [](double eps) { return PropertySpec(EpsZeroSum{eps}); };
  EXPECT_LE(PropertyThreshold(inst, family, 1e-3, backend()), 1e-3);
}

INSTANTIATE_TEST_SUITE_P(Backends, ConsistencyQueryTest, ::testing::Bool(),
                         [](const auto& info) {
                           return info.param ? "InteriorPoint" : "Simplex";
                         });

TEST(ConsistencySocpTest, SquaredNormWitnessIsSound) {
  conic::InteriorPointBackend ipm;
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = MakePartialPayoffFixture(rng, 2, 3, 2, 0.3);
    ConsistencyInstance inst{f.observations, Metric::kSumOfSquares};
    const PerturbationResult r = MinPerturbation(inst, ipm);
    ASSERT_EQ(r.status, SolveStatus::kOptimal) << r.message;
    EXPECT_LE(MetricDistance(Metric::kSumOfSquares, r.game, r.perturbed),
              r.delta_star + 1e-6);
    EXPECT_LE(r.delta_star,
              MetricDistance(Metric::kSumOfSquares, f.game, f.perturbed) +
                  1e-6);
  }
}

TEST(ConsistencySocpTest, MembershipIsNestedInDelta) {
  conic::InteriorPointBackend ipm;
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 6; ++trial) {
    auto f = MakePartialPayoffFixture(rng, 2, 2, 2, 0.3);
    const Game candidate = f.game + RandomGame(rng, 2, 2, 0.2);
    bool previous = false;
    for (double delta : {0.01, 0.1, 0.5, 2.0}) {
      ConsistencyInstance inst{f.observations, Metric::kSumOfSquares, delta};
      const bool now = Membership(candidate, inst, ipm);
      if (previous) EXPECT_TRUE(now) << "delta " << delta;
      previous = now;
    }
  }
}

TEST(ConsistencySocpTest, ScaleCovariance) {
  conic::InteriorPointBackend ipm;
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 6; ++trial) {
    auto f = MakePartialPayoffFixture(rng, 2, 2, 2, 0.3);
    const double delta =
        MetricDistance(Metric::kSumOfSquares, f.game, f.perturbed) + 1e-6;
    const double c = 3.0;
    std::vector<Observation> scaled;
    for (int k = 0; k < f.observations.size(); ++k) {
      Observation o = f.observations[k];
      (*o.payoff_value)[0] *= c;
      (*o.payoff_value)[1] *= c;
      scaled.push_back(o);
    }
    ConsistencyInstance base{f.observations, Metric::kSumOfSquares, delta};
    ConsistencyInstance inst{
        ObservationSet(ObservationModel::kPartialPayoff, scaled),
        Metric::kSumOfSquares, c * c * delta};
    EXPECT_TRUE(Membership(f.game, base, ipm));
    EXPECT_TRUE(Membership(Game(c * f.game.payoff(0), c * f.game.payoff(1)),
                           inst, ipm));
  }
}

TEST(ConsistencySocpTest, ThresholdNonincreasingInBudget) {
  conic::InteriorPointBackend ipm;
  std::mt19937_64 rng(13);
  auto f = MakePartialPayoffFixture(rng, 2, 2, 2, 0.2);
  ConsistencyInstance inst{f.observations, Metric::kMax};
  const auto family = [](double eps) { return PropertySpec(EpsZeroSum{eps}); };
  const double base = MinPerturbation(inst, ipm).delta_star;
  double previous = std::numeric_limits<double>::infinity();
  for (double budget : {base, base + 0.05, base + 0.2, base + 1.0}) {
    const double eps = PropertyThreshold(inst, family, budget, ipm);
    EXPECT_LE(eps, previous + 2e-4) << "budget " << budget;
    previous = eps;
  }
}

TEST(ConsistencySocpTest, EpsZeroSumAtZeroMatchesZeroSum) {
  conic::InteriorPointBackend ipm;
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 5; ++trial) {
    auto f = MakePartialPayoffFixture(rng, 2, 2, 2, 0.2);
    ConsistencyInstance a{f.observations, Metric::kMax, std::nullopt,
                          PropertySpec(ZeroSum{})};
    ConsistencyInstance b{f.observations, Metric::kMax, std::nullopt,
                          PropertySpec(EpsZeroSum{0.0})};
    const PerturbationResult ra = MinPerturbation(a, ipm);
    const PerturbationResult rb = MinPerturbation(b, ipm);
    ASSERT_EQ(ra.status, SolveStatus::kOptimal);
    ASSERT_EQ(rb.status, SolveStatus::kOptimal);
    EXPECT_NEAR(ra.delta_star, rb.delta_star, 1e-6);
  }
}

}  // namespace
}  // namespace eqscope
