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

// Simulates an entry game, recovers the game with and without the entry
// structure, and prints the consistent region of (theta1, theta2).

#include <cstdio>

#include "eqscope/conic/interior_point.h"
#include "eqscope/consistency/consistency.h"
#include "eqscope/experiments/experiments.h"

int main() {
  using eqscope::DofMode;
  eqscope::EntryGameParams params;
  params.l = 100;
  params.seed = 7;
  params.noise = DofMode::kSym;
  const eqscope::EntryObservations gen = eqscope::GenerateEntryObservations(
      params, eqscope::ObservationModel::kPayoffShifter);
  const eqscope::conic::InteriorPointBackend backend;

  eqscope::ConsistencyInstance inst;
  inst.observations = gen.observations;
  inst.metric = eqscope::Metric::kSumOfSquares;
  const eqscope::PerturbationResult free =
      eqscope::MinPerturbation(inst, backend);
  std::printf("unstructured delta* = %.4f\n", free.delta_star);

  eqscope::ScanOptions options;
  options.mode = DofMode::kSym;
  options.fixed = {0.0, std::nullopt, 0.0, std::nullopt};
  options.axes[0] = {eqscope::kTheta1, -2.4, 0.0, 0.2};
  options.axes[1] = {eqscope::kTheta2, -2.4, 0.0, 0.2};
  options.budget = eqscope::EntryDelta(DofMode::kSym, params.l, 0.99,
                                       params.sigma);
  const eqscope::PerturbationResult best = eqscope::EntryMinPerturbation(
      gen.observations, options, options.fixed, backend);
  std::printf("entry delta* = %.4f at theta = (%.3f, %.3f), truth (%.1f, %.1f)\n",
              best.delta_star, best.game.payoff(0)(1, 1),
              best.game.payoff(1)(1, 1), params.theta[0], params.theta[1]);

  const eqscope::RegionScan scan =
      eqscope::ScanRegion(gen.observations, options, backend);
  std::printf("budget %.3f; rows theta1, columns theta2 from -2.4 to 0\n",
              scan.budget);
  for (size_t x = 0; x < scan.values[0].size(); ++x) {
    std::printf("%5.1f ", scan.values[0][x]);
    for (size_t y = 0; y < scan.values[1].size(); ++y) {
      std::putchar(scan.inside[x][y] ? '#' : '.');
    }
    std::putchar('\n');
  }
  return 0;
}
