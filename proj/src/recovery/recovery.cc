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

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "Eigen/LU"
#include "Eigen/SVD"
#include "eqscope/core/errors.h"

namespace eqscope {

namespace {

Vector Vectorize(const Matrix& m) {
  Vector v(m.size());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  }
  return v;
}

Matrix CheckedInverse(const Matrix& e) {
  if (e.rows() != e.cols() || e.rows() == 0) {
    throw ShapeError("observation matrix must be square and nonempty");
  }
  Eigen::FullPivLU<Matrix> lu(e);
  if (!lu.isInvertible()) throw DomainError("observation matrix is singular");
  return lu.inverse();
}

}  // namespace

ObservationMatrix MakeObservationMatrix(const Matrix& e) {
  ObservationMatrix out;
  out.e = e;
  for (int r = 0; r < e.rows(); ++r) out.rows.push_back(r);
  Eigen::JacobiSVD<Matrix> svd(e);
  const Vector& s = svd.singularValues();
  const double smin = s.size() > 0 ? s(s.size() - 1) : 0.0;
  out.condition = smin > 0.0 ? s(0) / smin
                             : std::numeric_limits<double>::infinity();
  out.singular = !(out.condition <= kSingularCondition);
  return out;
}

ObservationMatrix SelectIndependentSubset(const ObservationSet& observations,
                                          double tol) {
  const int n = observations.m1() * observations.m2();
  const int l = observations.size();
  std::vector<Vector> residual;
  for (int k = 0; k < l; ++k) {
    residual.push_back(Vectorize(observations[k].equilibrium.probs()));
  }
  std::vector<bool> used(l, false);
  std::vector<int> chosen;
  while (static_cast<int>(chosen.size()) < n) {
    int best = -1;
    double best_norm = tol;
    for (int k = 0; k < l; ++k) {
      if (used[k]) continue;
      const double norm = residual[k].norm();
      if (norm > best_norm) {
        best = k;
        best_norm = norm;
      }
    }
    if (best < 0) break;
    used[best] = true;
    chosen.push_back(best);
    const Vector q = residual[best] / best_norm;
    for (int k = 0; k < l; ++k) {
      if (!used[k]) residual[k] -= q.dot(residual[k]) * q;
    }
  }
  const int rank = static_cast<int>(chosen.size());
  if (rank < n) {
    throw NotIdentifiableError("observed equilibria span rank " +
                                   std::to_string(rank) + " of " +
                                   std::to_string(n),
                               rank);
  }
  Matrix e(n, n);
  for (int r = 0; r < n; ++r) {
    e.row(r) = Vectorize(observations[chosen[r]].equilibrium.probs());
  }
  ObservationMatrix out = MakeObservationMatrix(e);
  out.rows = chosen;
  return out;
}

double InducedNormInverse(const Matrix& e, InducedNorm which,
                          double rel_tol) {
  const Matrix inv = CheckedInverse(e);
  if (which == InducedNorm::kInfinity) {
    return inv.cwiseAbs().rowwise().sum().maxCoeff();
  }
  const Matrix gram = inv.transpose() * inv;
  const int n = static_cast<int>(gram.rows());
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = 1.0 + 0.1 * i / n;
  v.normalize();
  double lambda = 0.0;
  for (int iter = 0; iter < 100000; ++iter) {
    Vector w = gram * v;
    const double next = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    if (std::abs(next - lambda) <= rel_tol * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

double InducedNormInverse(const ObservationMatrix& e, InducedNorm which) {
  return InducedNormInverse(e.e, which);
}

RecoveryBoundCheck VerifyRecoveryBound(const Game& truth,
                                       const Game& recovered,
                                       const ObservationMatrix& e,
                                       double delta, Metric metric) {
  CheckShape(recovered, truth.m1(), truth.m2());
  if (e.e.rows() != truth.m1() * truth.m2()) {
    throw ShapeError("observation matrix does not match the game size");
  }
  if (delta < 0.0) throw DomainError("delta must be nonnegative");
  RecoveryBoundCheck out;
  out.ok = true;
  out.direct_ok = true;
  const bool two = metric == Metric::kSumOfSquares;
  out.norm_inverse =
      InducedNormInverse(e, two ? InducedNorm::kTwo : InducedNorm::kInfinity);
  for (int p = 0; p < 2; ++p) {
    const Matrix diff = truth.payoff(p) - recovered.payoff(p);
    out.lhs[p] = two ? diff.norm() : diff.cwiseAbs().maxCoeff();
    out.rhs[p] = two ? std::sqrt(2.0 * out.norm_inverse * delta)
                     : 2.0 * out.norm_inverse * delta;
    out.ok = out.ok && out.lhs[p] <= out.rhs[p] + 1e-6;
  }
  out.direct_rhs = two ? 2.0 * out.norm_inverse * std::sqrt(delta)
                       : out.rhs[0];
  for (int p = 0; p < 2; ++p) {
    out.direct_ok = out.direct_ok && out.lhs[p] <= out.direct_rhs + 1e-6;
  }
  return out;
}

Example2 Example2Instance(double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon < 0.25)) {
    throw DomainError("epsilon must lie in (0, 0.25)");
  }
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  Example2 ex;
  ex.epsilon = epsilon;
  ex.delta = delta;
  const double off = (0.75 - epsilon) / 3.0;
  ex.e = Matrix::Constant(4, 4, off);
  ex.e.diagonal().setConstant(0.25 + epsilon);

  const std::array<double, 4> v = {delta, -delta, delta, -delta};
  std::vector<Observation> list;
  for (int k = 0; k < 4; ++k) {
    Matrix probs(2, 2);
    probs << ex.e(k, 0), ex.e(k, 1), ex.e(k, 2), ex.e(k, 3);
    Observation obs;
    obs.equilibrium = CorrelatedEquilibrium(probs);
    obs.payoff_value = std::array<double, 2>{v[k], 0.0};
    list.push_back(obs);
  }
  ex.observations =
      ObservationSet(ObservationModel::kPartialPayoff, std::move(list));

  const Matrix zero = Matrix::Zero(2, 2);
  auto columns = [&](double first, double second) {
    Matrix m(2, 2);
    m << first, second, first, second;
    return Game(m, zero);
  };
  const double a = delta / (0.5 + 2.0 * epsilon / 3.0);
  ex.game = Game::Zero(2, 2);
  const Game up = columns(a, 0.0);
  const Game down = columns(0.0, -a);
  ex.perturbed = {up, down, up, down};

  const double big = delta / epsilon;
  const double ratio = (3.0 - 2.0 * epsilon) / (3.0 - 4.0 * epsilon);
  ex.rival = columns(big, -big);
  const Game rival_up = columns(big, -big * ratio);
  const Game rival_down = columns(big * ratio, -big);
  ex.rival_perturbed = {rival_up, rival_down, rival_up, rival_down};

  ex.game_distance = a;
  ex.rival_distance = 2.0 * delta / (3.0 - 4.0 * epsilon);
  ex.gap = big;
  ex.gap_closed_form = big - a;
  return ex;
}

Matrix ObservedSupport(const ObservationSet& observations, double tol) {
  Matrix mask = Matrix::Zero(observations.m1(), observations.m2());
  for (int k = 0; k < observations.size(); ++k) {
    const Matrix& probs = observations[k].equilibrium.probs();
    for (int i = 0; i < probs.rows(); ++i) {
      for (int j = 0; j < probs.cols(); ++j) {
        if (probs(i, j) > tol) mask(i, j) = 1.0;
      }
    }
  }
  return mask;
}

SparseRecovery SparseSupportRecovery(const ConsistencyInstance& inst,
                                     const conic::Backend& backend) {
  SparseRecovery out;
  out.observed = ObservedSupport(inst.observations);
  const Matrix mask = out.observed;
  ConsistencyInstance restricted = inst;
  restricted.hook = [mask, user = inst.hook](
                        conic::Program& program, const GameVariables& game,
                        std::span<const GameVariables> perturbed) {
    if (user) user(program, game, perturbed);
    if (mask.minCoeff() > 0.0) return;
    auto floor_below = [&](const GameVariables& g, const std::string& name) {
      for (int p = 0; p < 2; ++p) {
        const conic::Variable floor = program.AddScalar(name);
        for (int i = 0; i < mask.rows(); ++i) {
          for (int j = 0; j < mask.cols(); ++j) {
            if (mask(i, j) > 0.0) {
              program.AddGreaterEqual(g(p, i, j), floor.expr());
            } else {
              program.AddLessEqual(g(p, i, j), floor.expr() - 1.0);
            }
          }
        }
      }
    };
    floor_below(game, "floor");
    for (const GameVariables& gk : perturbed) {
      floor_below(gk, "floor");
      for (int p = 0; p < 2; ++p) {
        for (int i = 0; i < mask.rows(); ++i) {
          for (int j = 0; j < mask.cols(); ++j) {
            if (mask(i, j) == 0.0) {
              program.AddEqual(gk(p, i, j), game(p, i, j));
            }
          }
        }
      }
    }
  };
  out.result = MinPerturbation(restricted, backend);
  return out;
}

}  // namespace eqscope
