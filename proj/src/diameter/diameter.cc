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

#include "eqscope/diameter/diameter.h"

#include <cmath>
#include <limits>

#include "eqscope/core/errors.h"
#include "eqscope/util/parallel.h"

namespace eqscope {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct EntryResult {
  conic::SolveStatus status = conic::SolveStatus::kNumericalTrouble;
  double value = 0.0;
  bool capped = false;
  std::optional<std::pair<Game, Game>> witnesses;
  std::string message;
};

EntryResult SolveEntry(const ConsistencyInstance& inst, int player, int i,
                       int j, const conic::Backend& backend,
                       const DiameterOptions& options) {
  conic::Program program;
  const conic::LinExpr delta(*inst.delta);
  const ConsistentSetVariables tilde =
      AppendConsistentSet(program, inst, delta, "Gtilde");
  const ConsistentSetVariables hat =
      AppendConsistentSet(program, inst, delta, "Ghat");
  const conic::LinExpr gap =
      tilde.game(player, i, j) - hat.game(player, i, j);
  program.Maximize(options.swap_roles ? -gap : gap);
  const conic::Solution sol = conic::Solve(program, backend);
  EntryResult out;
  out.status = sol.status;
  out.message = sol.message;
  if (sol.status == conic::SolveStatus::kUnbounded) {
    out.value = kInf;
  } else if (sol.ok()) {
    out.value = sol.objective;
    if (out.value > options.cap) {
      out.value = kInf;
      out.capped = true;
    } else {
      Game a = tilde.game.Value(sol);
      Game b = hat.game.Value(sol);
      if (options.swap_roles) std::swap(a, b);
      out.witnesses.emplace(std::move(a), std::move(b));
    }
  }
  return out;
}

}  // namespace

DiameterReport Diameter(const ConsistencyInstance& inst,
                        const conic::Backend& backend,
                        const DiameterOptions& options) {
  if (!inst.delta) throw DomainError("diameter needs a fixed delta");
  if (!(*inst.delta >= 0.0)) throw DomainError("delta must be nonnegative");
  const int m1 = inst.observations.m1();
  const int m2 = inst.observations.m2();
  const int per_player = m1 * m2;
  std::vector<EntryResult> results(2 * per_player);
  ParallelFor(2 * per_player, options.jobs, [&](int task) {
    const int player = task / per_player;
    const int cell = task % per_player;
    results[task] =
        SolveEntry(inst, player, cell / m2, cell % m2, backend, options);
  });

  DiameterReport report;
  report.per_entry = {Matrix::Zero(m1, m2), Matrix::Zero(m1, m2)};
  double best = -kInf;
  int infeasible = 0;
  for (int task = 0; task < 2 * per_player; ++task) {
    const EntryResult& r = results[task];
    const int player = task / per_player;
    const int i = (task % per_player) / m2;
    const int j = (task % per_player) % m2;
    if (r.status == conic::SolveStatus::kInfeasible) {
      ++infeasible;
      report.per_entry[player](i, j) = -kInf;
      continue;
    }
    const bool solved = r.status == conic::SolveStatus::kOptimal ||
                        r.status == conic::SolveStatus::kUnbounded;
    if (!solved) {
      report.complete = false;
      report.per_entry[player](i, j) = std::numeric_limits<double>::quiet_NaN();
      report.diagnostics.push_back(
          "entry (" + std::to_string(player) + "," + std::to_string(i) + "," +
          std::to_string(j) + "): " + conic::ToString(r.status) + " " +
          r.message);
      continue;
    }
    report.per_entry[player](i, j) = r.value;
    if (r.status == conic::SolveStatus::kUnbounded) report.unbounded = true;
    if (r.capped) report.capped = true;
    if (r.value > best) {
      best = r.value;
      report.argmax = {player, i, j};
      report.witnesses = r.witnesses;
    }
  }
  if (infeasible == 2 * per_player) {
    report.empty = true;
  } else if (infeasible > 0) {
    report.complete = false;
    report.diagnostics.push_back(
        std::to_string(infeasible) +
        " entry programs infeasible while others solved");
  }
  report.value = std::isfinite(best) || best == kInf ? best : 0.0;
  if (report.value < 0.0) report.value = 0.0;
  if (report.value == kInf) report.witnesses.reset();
  return report;
}

DiameterReport Diameter(const ObservationSet& observations, double delta,
                        Metric metric, const conic::Backend& backend,
                        const DiameterOptions& options) {
  ConsistencyInstance inst;
  inst.observations = observations;
  inst.metric = metric;
  inst.delta = delta;
  return Diameter(inst, backend, options);
}

bool IsNondecreasing(std::span<const double> values, double tol) {
  for (size_t k = 1; k < values.size(); ++k) {
    if (values[k] < values[k - 1] - tol) return false;
  }
  return true;
}

bool DiameterMonotonicityCheck(const ConsistencyInstance& inst,
                               std::span<const double> deltas,
                               const conic::Backend& backend,
                               const DiameterOptions& options) {
  if (!IsNondecreasing(deltas, 0.0)) {
    throw DomainError("deltas must be sorted ascending");
  }
  std::vector<double> values;
  for (double d : deltas) {
    ConsistencyInstance at = inst;
    at.delta = d;
    const DiameterReport r = Diameter(at, backend, options);
    if (!r.complete) {
      throw SolverTroubleError("diameter incomplete at delta " +
                               std::to_string(d));
    }
    values.push_back(r.value);
  }
  return IsNondecreasing(values);
}

}  // namespace eqscope
