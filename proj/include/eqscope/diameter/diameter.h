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

#ifndef EQSCOPE_DIAMETER_DIAMETER_H_
#define EQSCOPE_DIAMETER_DIAMETER_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eqscope/conic/solver.h"
#include "eqscope/consistency/consistency.h"
#include "eqscope/core/game.h"

namespace eqscope {

struct DiameterOptions {
  // Worker threads; 0 means one per hardware thread.
  int jobs = 0;
  // Objectives above the cap count as unbounded (and are flagged capped).
  double cap = 1e6;
  // Maximize Ghat - Gtilde instead of Gtilde - Ghat (symmetry checks).
  bool swap_roles = false;
};

struct DiameterReport {
  // Largest entrywise gap between two consistent games; +infinity when some
  // subprogram is unbounded or capped.
  double value = 0.0;
  bool unbounded = false;
  bool capped = false;
  // Every entry program is infeasible: no game is consistent at this delta.
  // `value` is then 0 and per_entry holds -infinity.
  bool empty = false;
  // (player, i, j) of the entry attaining `value`.
  std::array<int, 3> argmax = {0, 0, 0};
  // Consistent games realizing the gap at argmax, when finite.
  std::optional<std::pair<Game, Game>> witnesses;
  // Optimal value of each per-entry program, per player.
  std::array<Matrix, 2> per_entry;
  // False when a subprogram hit solver trouble; `value` then covers only
  // the entries that solved.
  bool complete = true;
  std::vector<std::string> diagnostics;
};

// Solves the 2*m1*m2 pairwise programs
//   sup gamma  s.t.  Gtilde, Ghat in S_d(delta),
//                    Gtilde_p(i,j) - Ghat_p(i,j) >= gamma
// and reports their maximum. `inst.delta` must be set.
DiameterReport Diameter(const ConsistencyInstance& inst,
                        const conic::Backend& backend,
                        const DiameterOptions& options = {});
DiameterReport Diameter(const ObservationSet& observations, double delta,
                        Metric metric, const conic::Backend& backend,
                        const DiameterOptions& options = {});

// True iff the values never drop by more than tol.
bool IsNondecreasing(std::span<const double> values, double tol = 1e-5);

// Diameters over ascending deltas are nondecreasing.
bool DiameterMonotonicityCheck(const ConsistencyInstance& inst,
                               std::span<const double> deltas,
                               const conic::Backend& backend,
                               const DiameterOptions& options = {});

}  // namespace eqscope

#endif  // EQSCOPE_DIAMETER_DIAMETER_H_
