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

#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "eqscope/conic/interior_point.h"
#include "eqscope/conic/program.h"
#include "eqscope/conic/simplex.h"
#include "eqscope/conic/solver.h"
#include "gtest/gtest.h"

namespace eqscope::conic {
namespace {

TEST(SolveTest, LowerBound) {
  Program p;
  const Variable x = p.AddScalar("x");
  p.AddGreaterEqual(x.expr(), 3.0);
  p.Minimize(x.expr());
  for (const Backend* b : std::vector<const Backend*>{
           new InteriorPointBackend(), new SimplexBackend()}) {
    const Solution s = Solve(p, *b);
    ASSERT_EQ(s.status, SolveStatus::kOptimal) << b->name();
    EXPECT_NEAR(s.Value(x), 3.0, 1e-7);
    delete b;
  }
}

TEST(SolveTest, ProjectionOntoPoint) {
  Program p;
  const Variable x = p.AddScalar("x");
  const Variable y = p.AddScalar("y");
  const Variable t = p.AddScalar("t");
  p.AddSoc(t.expr(), {x.expr() - 1.0, y.expr() - 2.0});
  p.Minimize(t.expr());
  const Solution s = Solve(p, InteriorPointBackend());
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_NEAR(s.Value(t), 0.0, 1e-6);
  EXPECT_NEAR(s.Value(x), 1.0, 1e-5);
  EXPECT_NEAR(s.Value(y), 2.0, 1e-5);
}

TEST(SolveTest, FixedIndefiniteMatrixIsInfeasible) {
  Program p;
  p.AddScalar("unused");
  p.AddPsd(2, {1.0, 2.0, 1.0});
  p.Minimize(0.0);
  EXPECT_EQ(Solve(p, InteriorPointBackend()).status,
            SolveStatus::kInfeasible);
  Program q;
  q.AddScalar("unused");
  q.AddPsd(2, {2.0, 1.0, 2.0});
  q.Minimize(0.0);
  EXPECT_EQ(Solve(q, InteriorPointBackend()).status, SolveStatus::kOptimal);
}

TEST(SolveTest, SimplexRejectsCones) {
  Program p;
  const Variable t = p.AddScalar("t");
  p.AddSoc(t.expr(), {LinExpr(1.0)});
  p.Minimize(t.expr());
  EXPECT_EQ(Solve(p, SimplexBackend()).status, SolveStatus::kUnsupported);
  EXPECT_FALSE(SimplexBackend().SupportsConic());
  EXPECT_TRUE(InteriorPointBackend().SupportsConic());
}

TEST(ValidateTest, Diagnostics) {
  Program p;
  const Variable x = p.AddScalar("x");
  p.AddLessEqual(x.expr(), 1.0);
  p.Minimize(x.expr());
  EXPECT_TRUE(p.Validate().empty());

  Program bad = p;
  bad.AddLessEqual(LinExpr::Term(7), 1.0);
  EXPECT_EQ(bad.Validate().size(), 1u);
  EXPECT_THROW(Solve(bad, InteriorPointBackend()), InvalidProgramError);

  Program concave = p;
  concave.SetObjective({Sense::kMaximize, LinExpr(), {x.expr()}});
  EXPECT_EQ(concave.Validate().size(), 1u);

  Program psd = p;
  psd.AddPsd(2, {x.expr(), 0.0});
  EXPECT_EQ(psd.Validate().size(), 1u);
}

// Random program touching every constraint kind.
Program RandomProgram(std::mt19937_64& rng, bool conic) {
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> pick(2, 4);
  Program p;
  const int n = pick(rng);
  const Variable x = p.AddMatrix(n, 1, "x");
  auto random_expr = [&] {
    LinExpr e(normal(rng));
    for (int i = 0; i < n; ++i) e += normal(rng) * x(i, 0);
    return e;
  };
  for (int i = 0; i < n; ++i) {
    p.AddLessEqual(x(i, 0), 2.0 + std::abs(normal(rng)));
    p.AddGreaterEqual(x(i, 0), -2.0 - std::abs(normal(rng)));
  }
  p.AddLessEqual(random_expr(), 3.0);
  p.AddEqual(x(0, 0) + x(1, 0), normal(rng) * 0.5);
  if (conic) {
    const Variable t = p.AddScalar("t");
    p.AddSoc(t.expr(), {random_expr(), random_expr()});
    p.AddSquaredNorm({random_expr(), random_expr()}, t.expr() + 10.0);
    const Variable s = p.AddSymmetric(2, "s");
    p.AddPsd(s);
    p.AddEqual(s(0, 0) + s(1, 1), 1.0);
    p.Minimize(t.expr() + random_expr() + s(1, 0), {random_expr()});
  } else {
    p.Minimize(random_expr());
  }
  return p;
}

TEST(TextTest, RoundTrip) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const Program p = RandomProgram(rng, trial % 2 == 0);
    const std::string text = p.ToText();
    const Program back = Program::FromText(text);
    EXPECT_EQ(back, p) << text;
    EXPECT_EQ(back.ToText(), text);
  }
}

TEST(GoldenSuiteTest, BackendsAgreeOnLps) {
  std::mt19937_64 rng(3);
  InteriorPointBackend ipm;
  SimplexBackend simplex;
  for (int trial = 0; trial < 40; ++trial) {
    const Program p = RandomProgram(rng, false);
    const Solution a = Solve(p, ipm);
    const Solution b = Solve(p, simplex);
    ASSERT_EQ(a.status, b.status) << "trial " << trial;
    if (a.status != SolveStatus::kOptimal) continue;
    EXPECT_NEAR(a.objective, b.objective,
                1e-5 * std::max(1.0, std::abs(b.objective)))
        << "trial " << trial;
    EXPECT_LE(MaxViolation(p, a.x), kResidualTolerance);
    EXPECT_LE(MaxViolation(p, b.x), kResidualTolerance);
  }
}

TEST(GoldenSuiteTest, ConicOptimaAreConsistent) {
  std::mt19937_64 rng(5);
  InteriorPointBackend ipm;
  int solved = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const Program p = RandomProgram(rng, true);
    const Solution s = Solve(p, ipm);
    if (s.status != SolveStatus::kOptimal) {
      EXPECT_EQ(s.status, SolveStatus::kInfeasible) << s.message;
      continue;
    }
    ++solved;
    EXPECT_LE(MaxViolation(p, s.x), kResidualTolerance);
    const double value = EvaluateObjective(p, s.x);
    EXPECT_NEAR(s.objective, value, 1e-6 * std::max(1.0, std::abs(value)));
    EXPECT_NEAR(s.objective, s.dual_objective,
                1e-5 * std::max(1.0, std::abs(value)));
  }
  EXPECT_GT(solved, 15);
}

TEST(GoldenSuiteTest, LeastSquaresClosedForm) {
  // min ||A x - b||^2 has the normal-equation solution.
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(5, 3);
  Eigen::VectorXd b(5);
  for (int i = 0; i < 5; ++i) {
    b(i) = normal(rng);
    for (int j = 0; j < 3; ++j) a(i, j) = normal(rng);
  }
  Program p;
  const Variable x = p.AddMatrix(3, 1, "x");
  std::vector<LinExpr> squares;
  for (int i = 0; i < 5; ++i) {
    LinExpr row(-b(i));
    for (int j = 0; j < 3; ++j) row += a(i, j) * x(j, 0);
    squares.push_back(row);
  }
  p.Minimize(LinExpr(), squares);
  const Solution s = Solve(p, InteriorPointBackend());
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  const Eigen::VectorXd want = a.colPivHouseholderQr().solve(b);
  EXPECT_TRUE(s.MatrixValue(x).col(0).isApprox(want, 1e-5));
  EXPECT_NEAR(s.objective, (a * want - b).squaredNorm(), 1e-7);
}

TEST(ConcurrencyTest, DistinctProgramsInParallel) {
  std::mt19937_64 rng(21);
  std::vector<Program> programs;
  for (int i = 0; i < 8; ++i) programs.push_back(RandomProgram(rng, true));
  InteriorPointBackend ipm;
  std::vector<Solution> serial;
  for (const Program& p : programs) serial.push_back(Solve(p, ipm));
  std::vector<Solution> parallel(programs.size());
  std::vector<std::thread> threads;
  for (size_t i = 0; i < programs.size(); ++i) {
    threads.emplace_back(
        [&, i] { parallel[i] = Solve(programs[i], ipm); });
  }
  for (std::thread& t : threads) t.join();
  for (size_t i = 0; i < programs.size(); ++i) {
    EXPECT_EQ(parallel[i].status, serial[i].status);
    EXPECT_EQ(parallel[i].x, serial[i].x);
  }
}

}  // namespace
}  // namespace eqscope::conic
