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

#include "eqscope/core/errors.h"

namespace eqscope {

using conic::LinExpr;
using conic::Program;
using conic::SolveStatus;

Game GameVariables::Value(const conic::Solution& solution) const {
  return Game(solution.MatrixValue(payoff[0]), solution.MatrixValue(payoff[1]));
}

GameVariables AddGameVariables(Program& program, int m1, int m2,
                               const std::string& name) {
  return GameVariables{{program.AddMatrix(m1, m2, name + ".G1"),
                        program.AddMatrix(m1, m2, name + ".G2")}};
}

int BuildEquilibriumConstraints(Program& program, const GameVariables& game,
                                const CorrelatedEquilibrium& e,
                                bool drop_vacuous) {
  const int m1 = game.m1();
  const int m2 = game.m2();
  if (e.m1() != m1 || e.m2() != m2) {
    throw ShapeError("equilibrium shape does not match the game variables");
  }
  int count = 0;
  for (int i = 0; i < m1; ++i) {
    for (int ip = 0; ip < m1; ++ip) {
      if (ip == i) continue;
      LinExpr gain;
      for (int j = 0; j < m2; ++j) {
        gain += e(i, j) * (game(0, i, j) - game(0, ip, j));
      }
      if (drop_vacuous && gain.IsConstant()) continue;
      program.AddGreaterEqual(gain, 0.0);
      ++count;
    }
  }
  for (int j = 0; j < m2; ++j) {
    for (int jp = 0; jp < m2; ++jp) {
      if (jp == j) continue;
      LinExpr gain;
      for (int i = 0; i < m1; ++i) {
        gain += e(i, j) * (game(1, i, j) - game(1, i, jp));
      }
      if (drop_vacuous && gain.IsConstant()) continue;
      program.AddGreaterEqual(gain, 0.0);
      ++count;
    }
  }
  return count;
}

int BuildMetricConstraint(Program& program, const GameVariables& game,
                          std::span<const GameVariables> perturbed,
                          Metric metric, const LinExpr& delta,
                          const ObservationSet& observations) {
  const bool shifted =
      observations.model() == ObservationModel::kPayoffShifter;
  if (shifted && static_cast<int>(perturbed.size()) != observations.size()) {
    throw ShapeError("one perturbed game per shifter expected");
  }
  // Entry (p, i, j) of G^k - beta^k - G.
  auto gap = [&](int k, int p, int i, int j) {
    LinExpr d = perturbed[k](p, i, j) - game(p, i, j);
    if (shifted) d -= LinExpr(observations[k].shifter->payoff(p)(i, j));
    return d;
  };
  const bool zero_radius = delta.IsConstant() && delta.constant() == 0.0;
  int count = 0;
  if (metric == Metric::kSumOfSquares) {
    std::vector<LinExpr> terms;
    for (size_t k = 0; k < perturbed.size(); ++k) {
      if (perturbed[k].m1() != game.m1() || perturbed[k].m2() != game.m2()) {
        throw ShapeError("perturbed game shape does not match");
      }
      for (int p = 0; p < 2; ++p) {
        for (int i = 0; i < game.m1(); ++i) {
          for (int j = 0; j < game.m2(); ++j) {
            terms.push_back(gap(static_cast<int>(k), p, i, j));
          }
        }
      }
    }
    program.AddSquaredNorm(std::move(terms), delta);
    return 1;
  }
  for (size_t k = 0; k < perturbed.size(); ++k) {
    if (perturbed[k].m1() != game.m1() || perturbed[k].m2() != game.m2()) {
      throw ShapeError("perturbed game shape does not match");
    }
    for (int p = 0; p < 2; ++p) {
      for (int i = 0; i < game.m1(); ++i) {
        for (int j = 0; j < game.m2(); ++j) {
          const LinExpr d = gap(static_cast<int>(k), p, i, j);
          if (zero_radius) {
            program.AddEqual(d, 0.0);
            ++count;
          } else {
            program.AddLessEqual(d, delta);
            program.AddLessEqual(-d, delta);
            count += 2;
          }
        }
      }
    }
  }
  return count;
}

int BuildPayoffInfoConstraints(Program& program,
                               std::span<const GameVariables> perturbed,
                               const ObservationSet& observations) {
  if (observations.model() != ObservationModel::kPartialPayoff) {
    throw ModelError("payoff-information constraints need the partial payoff "
                     "model");
  }
  if (static_cast<int>(perturbed.size()) != observations.size()) {
    throw ShapeError("one perturbed game per observation expected");
  }
  int count = 0;
  for (int k = 0; k < observations.size(); ++k) {
    const Observation& obs = observations[k];
    if (!obs.payoff_value) throw ModelError("observation lacks payoff value");
    for (int p = 0; p < 2; ++p) {
      LinExpr value;
      for (int i = 0; i < observations.m1(); ++i) {
        for (int j = 0; j < observations.m2(); ++j) {
          value += obs.equilibrium(i, j) * perturbed[k](p, i, j);
        }
      }
      program.AddEqual(value, (*obs.payoff_value)[p]);
      ++count;
    }
  }
  return count;
}

int AttachProperty(Program& program, const PropertySpec& spec,
                   const GameVariables& game) {
  const int m1 = game.m1();
  const int m2 = game.m2();
  int count = 0;
  if (std::holds_alternative<ZeroSum>(spec)) {
    for (int i = 0; i < m1; ++i) {
      for (int j = 0; j < m2; ++j) {
        program.AddEqual(game(0, i, j) + game(1, i, j), 0.0);
        ++count;
      }
    }
  } else if (const auto* eps = std::get_if<EpsZeroSum>(&spec)) {
    if (!(eps->eps >= 0.0)) throw DomainError("epsilon must be nonnegative");
    const conic::Variable u = program.AddMatrix(m1, m2, "abs_sum");
    LinExpr total;
    for (int i = 0; i < m1; ++i) {
      for (int j = 0; j < m2; ++j) {
        const LinExpr sum = game(0, i, j) + game(1, i, j);
        program.AddGreaterEqual(u(i, j), sum);
        program.AddGreaterEqual(u(i, j), -sum);
        total += u(i, j);
        count += 2;
      }
    }
    program.AddLessEqual(total, eps->eps);
    ++count;
  } else if (std::holds_alternative<ExactPotential>(spec)) {
    const conic::Variable phi = program.AddMatrix(m1, m2, "potential");
    for (int i = 0; i < m1; ++i) {
      for (int ip = 0; ip < m1; ++ip) {
        if (ip == i) continue;
        for (int j = 0; j < m2; ++j) {
          program.AddEqual(phi(i, j) - phi(ip, j),
                           game(0, i, j) - game(0, ip, j));
          ++count;
        }
      }
    }
    for (int j = 0; j < m2; ++j) {
      for (int jp = 0; jp < m2; ++jp) {
        if (jp == j) continue;
        for (int i = 0; i < m1; ++i) {
          program.AddEqual(phi(i, j) - phi(i, jp),
                           game(1, i, j) - game(1, i, jp));
          ++count;
        }
      }
    }
  } else {
    const auto& lp = std::get<LinearParam>(spec);
    const int t = lp.num_params();
    if (static_cast<int>(lp.basis[1].size()) != t) {
      throw ShapeError("both players need one basis matrix per parameter");
    }
    for (int p = 0; p < 2; ++p) {
      if (lp.offset[p].rows() != m1 || lp.offset[p].cols() != m2) {
        throw ShapeError("parametrization offset has the wrong shape");
      }
      for (const Matrix& b : lp.basis[p]) {
        if (b.rows() != m1 || b.cols() != m2) {
          throw ShapeError("parametrization basis has the wrong shape");
        }
      }
    }
    if (t == 0) {
      for (int p = 0; p < 2; ++p) {
        for (int i = 0; i < m1; ++i) {
          for (int j = 0; j < m2; ++j) {
            program.AddEqual(game(p, i, j), lp.offset[p](i, j));
            ++count;
          }
        }
      }
      return count;
    }
    const conic::Variable theta = program.AddMatrix(t, 1, "theta");
    for (int p = 0; p < 2; ++p) {
      for (int i = 0; i < m1; ++i) {
        for (int j = 0; j < m2; ++j) {
          LinExpr rhs(lp.offset[p](i, j));
          for (int s = 0; s < t; ++s) rhs += lp.basis[p][s](i, j) * theta(s, 0);
          program.AddEqual(game(p, i, j), rhs);
          ++count;
        }
      }
    }
    for (int s = 0; s < t && s < static_cast<int>(lp.pinned.size()); ++s) {
      if (lp.pinned[s]) {
        program.AddEqual(theta(s, 0), *lp.pinned[s]);
        ++count;
      }
    }
  }
  return count;
}

ConsistentSetVariables AppendConsistentSet(Program& program,
                                           const ConsistencyInstance& inst,
                                           const LinExpr& delta,
                                           const std::string& name) {
  const ObservationSet& obs = inst.observations;
  ConsistentSetVariables vars;
  vars.game = AddGameVariables(program, obs.m1(), obs.m2(), name);
  for (int k = 0; k < obs.size(); ++k) {
    vars.perturbed.push_back(AddGameVariables(
        program, obs.m1(), obs.m2(), name + ".k" + std::to_string(k)));
  }
  for (int k = 0; k < obs.size(); ++k) {
    BuildEquilibriumConstraints(program, vars.perturbed[k],
                                obs[k].equilibrium, inst.drop_vacuous);
  }
  BuildMetricConstraint(program, vars.game, vars.perturbed, inst.metric, delta,
                        obs);
  if (obs.model() == ObservationModel::kPartialPayoff) {
    BuildPayoffInfoConstraints(program, vars.perturbed, obs);
  }
  if (inst.property) AttachProperty(program, *inst.property, vars.game);
  if (inst.hook) inst.hook(program, vars.game, vars.perturbed);
  return vars;
}

bool Membership(const Game& game, const ConsistencyInstance& inst,
                const conic::Backend& backend) {
  if (!inst.delta) throw DomainError("membership needs a fixed delta");
  if (*inst.delta < 0.0) throw DomainError("delta must be nonnegative");
  CheckShape(game, inst.observations.m1(), inst.observations.m2());
  Program program;
  const ConsistentSetVariables vars =
      AppendConsistentSet(program, inst, LinExpr(*inst.delta), "G");
  for (int p = 0; p < 2; ++p) {
    for (int i = 0; i < game.m1(); ++i) {
      for (int j = 0; j < game.m2(); ++j) {
        program.AddEqual(vars.game(p, i, j), game.payoff(p)(i, j));
      }
    }
  }
  program.Minimize(LinExpr(0.0));
  const conic::Solution sol = conic::Solve(program, backend);
  switch (sol.status) {
    case SolveStatus::kOptimal:
      return true;
    case SolveStatus::kInfeasible:
      return false;
    default:
      throw SolverTroubleError("membership query: " + ToString(sol.status) +
                               " (" + sol.message + ")");
  }
}

PerturbationResult MinPerturbation(const ConsistencyInstance& inst,
                                   const conic::Backend& backend) {
  Program program;
  const conic::Variable delta = program.AddScalar("delta");
  const ConsistentSetVariables vars =
      AppendConsistentSet(program, inst, delta.expr(), "G");
  if (inst.metric == Metric::kMax) {
    program.AddGreaterEqual(delta.expr(), 0.0);
  }
  program.Minimize(delta.expr());
  const conic::Solution sol = conic::Solve(program, backend);
  PerturbationResult out;
  out.status = sol.status;
  out.message = sol.message;
  if (!sol.ok()) return out;
  out.delta_star = std::max(0.0, sol.Value(delta));
  out.game = vars.game.Value(sol);
  for (const GameVariables& gk : vars.perturbed) {
    out.perturbed.push_back(gk.Value(sol));
  }
  return out;
}

double PropertyThreshold(const ConsistencyInstance& inst,
                         const std::function<PropertySpec(double)>& family,
                         double delta_budget, const conic::Backend& backend,
                         double tol) {
  auto admissible = [&](double eps) {
    ConsistencyInstance with = inst;
    with.property = family(eps);
    const PerturbationResult r = MinPerturbation(with, backend);
    if (r.status == SolveStatus::kInfeasible) return false;
    if (r.status != SolveStatus::kOptimal) {
      throw SolverTroubleError("property threshold: " + ToString(r.status) +
                               " at eps " + std::to_string(eps));
    }
    return r.delta_star <= delta_budget + 1e-9;
  };
  if (admissible(0.0)) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (!admissible(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e8) {
      throw BracketError("no epsilon up to 1e8 meets the delta budget");
    }
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (admissible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace eqscope
