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

#include "eqscope/core/game.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "eqscope/core/errors.h"

namespace eqscope {
namespace {

void CheckPayoffShape(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("payoff matrices of the two players differ in shape");
  }
  if (a.rows() < 1 || a.cols() < 1) {
    throw ShapeError("game needs at least one action per player");
  }
  if (!a.allFinite() || !b.allFinite()) {
    throw DomainError("payoffs must be finite");
  }
}

// Rows a with a'x >= 0 for every deviation of either player, x the
// row-major flattening of the profile distribution.
std::vector<Vector> DeviationRows(const Game& game) {
  const int m1 = game.m1();
  const int m2 = game.m2();
  std::vector<Vector> rows;
  for (int i = 0; i < m1; ++i) {
    for (int ip = 0; ip < m1; ++ip) {
      if (ip == i) continue;
      Vector a = Vector::Zero(m1 * m2);
      for (int j = 0; j < m2; ++j) {
        a(i * m2 + j) = game.payoff(0)(i, j) - game.payoff(0)(ip, j);
      }
      rows.push_back(std::move(a));
    }
  }
  for (int j = 0; j < m2; ++j) {
    for (int jp = 0; jp < m2; ++jp) {
      if (jp == j) continue;
      Vector a = Vector::Zero(m1 * m2);
      for (int i = 0; i < m1; ++i) {
        a(i * m2 + j) = game.payoff(1)(i, j) - game.payoff(1)(i, jp);
      }
      rows.push_back(std::move(a));
    }
  }
  return rows;
}

struct DdVertex {
  Vector x;
  uint64_t tight = 0;
};

}  // namespace

Game::Game(Matrix payoff1, Matrix payoff2) {
  CheckPayoffShape(payoff1, payoff2);
  payoff_[0] = std::move(payoff1);
  payoff_[1] = std::move(payoff2);
}

Game Game::Zero(int m1, int m2) {
  return Game(Matrix::Zero(m1, m2), Matrix::Zero(m1, m2));
}

Game Game::operator+(const Game& other) const {
  CheckShape(other, m1(), m2());
  return Game(payoff_[0] + other.payoff_[0], payoff_[1] + other.payoff_[1]);
}

Game Game::operator-(const Game& other) const {
  CheckShape(other, m1(), m2());
  return Game(payoff_[0] - other.payoff_[0], payoff_[1] - other.payoff_[1]);
}

bool Game::IsApprox(const Game& other, double tol) const {
  if (other.m1() != m1() || other.m2() != m2()) return false;
  for (int p = 0; p < 2; ++p) {
    if ((payoff_[p] - other.payoff_[p]).cwiseAbs().maxCoeff() > tol) {
      return false;
    }
  }
  return true;
}

void CheckShape(const Game& game, int m1, int m2) {
  if (game.m1() != m1 || game.m2() != m2) {
    std::ostringstream msg;
    msg << "expected a " << m1 << "x" << m2 << " game, got " << game.m1()
        << "x" << game.m2();
    throw ShapeError(msg.str());
  }
}

CorrelatedEquilibrium::CorrelatedEquilibrium(Matrix probs) {
  if (probs.rows() < 1 || probs.cols() < 1) {
    throw ShapeError("equilibrium needs at least one profile");
  }
  if (!probs.allFinite()) throw DomainError("probabilities must be finite");
  for (Eigen::Index c = 0; c < probs.cols(); ++c) {
    for (Eigen::Index r = 0; r < probs.rows(); ++r) {
      double& v = probs(r, c);
      if (v < -1e-12) {
        throw DomainError("negative probability in equilibrium");
      }
      if (v < 0.0) v = 0.0;
    }
  }
  const double total = probs.sum();
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "probabilities sum to " << total << ", not 1";
    throw DomainError(msg.str());
  }
  probs /= total;
  probs_ = std::move(probs);
}

CorrelatedEquilibrium CorrelatedEquilibrium::PointMass(int m1, int m2, int i,
                                                       int j) {
  Matrix probs = Matrix::Zero(m1, m2);
  probs(i, j) = 1.0;
  return CorrelatedEquilibrium(std::move(probs));
}

std::string ToString(ObservationModel model) {
  switch (model) {
    case ObservationModel::kPartialPayoff:
      return "partial_payoff";
    case ObservationModel::kPayoffShifter:
      return "shifter";
    case ObservationModel::kNoPayoff:
      return "none";
  }
  return "none";
}

ObservationModel ObservationModelFromString(const std::string& name) {
  if (name == "partial_payoff") return ObservationModel::kPartialPayoff;
  if (name == "shifter") return ObservationModel::kPayoffShifter;
  if (name == "none") return ObservationModel::kNoPayoff;
  throw DomainError("unknown observation model '" + name + "'");
}

ObservationSet::ObservationSet(ObservationModel model,
                               std::vector<Observation> observations)
    : model_(model), observations_(std::move(observations)) {
  if (observations_.empty()) {
    throw ShapeError("observation set must contain at least one equilibrium");
  }
  m1_ = observations_.front().equilibrium.m1();
  m2_ = observations_.front().equilibrium.m2();
  for (const Observation& obs : observations_) {
    if (obs.equilibrium.m1() != m1_ || obs.equilibrium.m2() != m2_) {
      throw ShapeError("observations disagree on the game shape");
    }
    switch (model_) {
      case ObservationModel::kPartialPayoff:
        if (!obs.payoff_value) {
          throw ModelError("partial payoff model needs a payoff value per "
                           "observation");
        }
        if (!std::isfinite((*obs.payoff_value)[0]) ||
            !std::isfinite((*obs.payoff_value)[1])) {
          throw DomainError("payoff values must be finite");
        }
        break;
      case ObservationModel::kPayoffShifter:
        if (!obs.shifter) {
          throw ModelError("shifter model needs a shifter per observation");
        }
        CheckShape(*obs.shifter, m1_, m2_);
        break;
      case ObservationModel::kNoPayoff:
        break;
    }
  }
}

std::string ToString(Metric metric) {
  return metric == Metric::kSumOfSquares ? "d2" : "dinf";
}

Metric MetricFromString(const std::string& name) {
  if (name == "d2") return Metric::kSumOfSquares;
  if (name == "dinf") return Metric::kMax;
  throw DomainError("unknown metric '" + name + "'");
}

double MetricDistance(Metric metric, const Game& game,
                      std::span<const Game> perturbed) {
  double out = 0.0;
  for (const Game& gk : perturbed) {
    CheckShape(gk, game.m1(), game.m2());
    for (int p = 0; p < 2; ++p) {
      const Matrix diff = gk.payoff(p) - game.payoff(p);
      if (metric == Metric::kSumOfSquares) {
        out += diff.squaredNorm();
      } else {
        out = std::max(out, diff.cwiseAbs().maxCoeff());
      }
    }
  }
  return out;
}

double MetricDistance(Metric metric, const Game& game,
                      std::span<const Game> perturbed,
                      const ObservationSet& observations) {
  if (observations.model() != ObservationModel::kPayoffShifter) {
    return MetricDistance(metric, game, perturbed);
  }
  if (static_cast<int>(perturbed.size()) != observations.size()) {
    throw ShapeError("one perturbed game per observation expected");
  }
  std::vector<Game> unshifted;
  unshifted.reserve(perturbed.size());
  for (int k = 0; k < observations.size(); ++k) {
    unshifted.push_back(perturbed[k] - *observations[k].shifter);
  }
  return MetricDistance(metric, game, unshifted);
}

double EquilibriumViolation(const Game& game, const CorrelatedEquilibrium& e) {
  CheckShape(game, e.m1(), e.m2());
  Vector x(e.m1() * e.m2());
  for (int i = 0; i < e.m1(); ++i) {
    for (int j = 0; j < e.m2(); ++j) x(i * e.m2() + j) = e(i, j);
  }
  double worst = 0.0;
  for (const Vector& a : DeviationRows(game)) {
    worst = std::max(worst, -a.dot(x));
  }
  return worst;
}

bool IsCorrelatedEquilibrium(const Game& game, const CorrelatedEquilibrium& e,
                             double tol) {
  return EquilibriumViolation(game, e) <= tol;
}

std::vector<CorrelatedEquilibrium> EnumerateCeVertices(const Game& game) {
  const int m1 = game.m1();
  const int m2 = game.m2();
  const int n = m1 * m2;
  if (n > kMaxProfiles) {
    throw CapacityError("vertex enumeration supports at most 16 profiles");
  }
  std::vector<Vector> constraints;
  for (int t = 0; t < n; ++t) constraints.push_back(Vector::Unit(n, t));
  for (Vector& a : DeviationRows(game)) {
    if (a.cwiseAbs().maxCoeff() > 0.0) constraints.push_back(std::move(a));
  }

  std::vector<DdVertex> vertices;
  const uint64_t all_nonneg = (n == 64) ? ~0ULL : ((1ULL << n) - 1);
  for (int t = 0; t < n; ++t) {
    vertices.push_back({Vector::Unit(n, t), all_nonneg & ~(1ULL << t)});
  }

  for (size_t c = n; c < constraints.size(); ++c) {
    const Vector& a = constraints[c];
    const double tol = 1e-10 * std::max(1.0, a.cwiseAbs().maxCoeff());
    const uint64_t bit = 1ULL << c;
    std::vector<double> value(vertices.size());
    std::vector<int> pos, neg;
    std::vector<DdVertex> next;
    for (size_t v = 0; v < vertices.size(); ++v) {
      value[v] = a.dot(vertices[v].x);
      if (value[v] > tol) {
        pos.push_back(static_cast<int>(v));
        next.push_back(vertices[v]);
      } else if (value[v] >= -tol) {
        next.push_back(vertices[v]);
        next.back().tight |= bit;
      } else {
        neg.push_back(static_cast<int>(v));
      }
    }
    for (int p : pos) {
      for (int q : neg) {
        const uint64_t common = vertices[p].tight & vertices[q].tight;
        if (std::popcount(common) < n - 2) continue;
        Matrix rows(std::popcount(common) + 1, n);
        int r = 0;
        for (size_t s = 0; s < c; ++s) {
          if (common & (1ULL << s)) rows.row(r++) = constraints[s].transpose();
        }
        rows.row(r).setOnes();
        Eigen::FullPivLU<Matrix> lu(rows);
        lu.setThreshold(1e-10);
        if (lu.rank() != n - 1) continue;
        const double vp = value[p];
        const double vq = value[q];
        Vector x = (vp * vertices[q].x - vq * vertices[p].x) / (vp - vq);
        next.push_back({std::move(x), common | bit});
      }
    }
    vertices = std::move(next);
  }

  std::vector<CorrelatedEquilibrium> out;
  std::vector<Vector> seen;
  for (const DdVertex& v : vertices) {
    bool duplicate = false;
    for (const Vector& s : seen) {
      if ((s - v.x).cwiseAbs().maxCoeff() < 1e-9) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;
    seen.push_back(v.x);
    Matrix probs(m1, m2);
    for (int i = 0; i < m1; ++i) {
      for (int j = 0; j < m2; ++j) {
        probs(i, j) = std::max(0.0, v.x(i * m2 + j));
      }
    }
    probs /= probs.sum();
    out.emplace_back(std::move(probs));
  }
  return out;
}

std::vector<CorrelatedEquilibrium> NashEquilibria2x2(const Game& game) {
  CheckShape(game, 2, 2);
  const Matrix& a = game.payoff(0);
  const Matrix& b = game.payoff(1);
  std::vector<CorrelatedEquilibrium> out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (a(i, j) >= a(1 - i, j) && b(i, j) >= b(i, 1 - j)) {
        out.push_back(CorrelatedEquilibrium::PointMass(2, 2, i, j));
      }
    }
  }
  const double da = a(0, 0) - a(0, 1) - a(1, 0) + a(1, 1);
  const double db = b(0, 0) - b(1, 0) - b(0, 1) + b(1, 1);
  if (da != 0.0 && db != 0.0) {
    // p: probability of row 0; q: probability of column 0.
    const double p = (b(1, 1) - b(1, 0)) / db;
    const double q = (a(1, 1) - a(0, 1)) / da;
    if (p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0) {
      Matrix probs(2, 2);
      probs << p * q, p * (1 - q), (1 - p) * q, (1 - p) * (1 - q);
      out.emplace_back(std::move(probs));
    }
  }
  return out;
}

}  // namespace eqscope
