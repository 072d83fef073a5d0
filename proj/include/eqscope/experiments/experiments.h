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

#ifndef EQSCOPE_EXPERIMENTS_EXPERIMENTS_H_
#define EQSCOPE_EXPERIMENTS_EXPERIMENTS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eqscope/conic/solver.h"
#include "eqscope/consistency/consistency.h"
#include "eqscope/core/game.h"
#include "eqscope/core/json_io.h"

namespace eqscope {

// Regularized lower incomplete gamma P(a, x).
double RegularizedGammaP(double a, double x);

// Inverse CDF of the chi-square distribution by bisection (absolute
// tolerance 1e-8).
double ChiSquareQuantile(int dof, double level);

// sigma^2 times the chi-square quantile.
double ChiSquareDelta(int dof, double level, double sigma);

// How the observer models the unobserved entry shocks of one player in one
// observation: one shock shared by both entry payoffs (kSym) or one per
// entry payoff (kAsym).
enum class DofMode { kSym, kAsym };

std::string ToString(DofMode mode);
DofMode DofModeFromString(const std::string& name);

// d2 radius holding the generator's noise with probability `level`. kAsym
// uses 4l degrees of freedom; kSym uses 2l and counts each shared shock on
// both entry payoffs it moves.
double EntryDelta(DofMode mode, int l, double level, double sigma);

// Two-player entry game. Action 0 stays out, action 1 enters; player p gets
// gamma_p alone in the market, theta_p when both enter and 0 when out.
struct EntryGameParams {
  std::array<double, 2> gamma = {0.0, 0.0};
  std::array<double, 2> theta = {-1.0, -1.3};
  // Unobserved noise and observed shifter standard deviations.
  double sigma = 0.1;
  double sigma_s = 1.0;
  int l = 500;
  uint64_t seed = 0;
  // kSym draws one noise term per player and observation and adds it to
  // both entry payoffs; kAsym draws one per entry payoff. Shifters are
  // always drawn per entry payoff.
  DofMode noise = DofMode::kAsym;

  void Validate() const;
};

Game EntryGame(const std::array<double, 2>& gamma,
               const std::array<double, 2>& theta);

// True when (player, i, j) is an entry payoff, i.e. player p enters.
bool IsEntryPayoff(int player, int i, int j);

struct EntryObservations {
  ObservationSet observations;
  Game game;
  std::vector<Game> perturbed;
  // Unobserved noise of each observation (perturbed - game - shifter).
  std::vector<Game> noise;
};

// Perturbs the entry payoffs of the entry game, draws one Nash equilibrium
// of each perturbed game uniformly from the closed-form 2x2 list, and
// attaches shifters or payoff values by model. Observation k uses the
// stream (seed, k).
EntryObservations GenerateEntryObservations(const EntryGameParams& params,
                                            ObservationModel model);

// Constraints the observer knows for entry games: out payoffs of the
// perturbed games (and of the base game when `base_zeros`) are 0, and with
// kSym the unobserved perturbation G^k - beta^k - G of a player's two entry
// payoffs is equal.
PerturbationHook EntryStructureHook(DofMode mode,
                                    const ObservationSet& observations,
                                    bool base_zeros = true);

// Parameters of the entry game in LinearParam order.
enum EntryParam { kGamma1 = 0, kTheta1 = 1, kGamma2 = 2, kTheta2 = 3 };

std::string EntryParamName(int param);
int EntryParamFromString(const std::string& name);

// G_1 = gamma_1 [enter, other out] + theta_1 [both enter], likewise for
// player 2; `pinned` has one slot per EntryParam.
LinearParam EntryLinearParam(
    const std::array<std::optional<double>, 4>& pinned = {});

struct ScanAxis {
  int param = kTheta1;
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;

  // lo, lo + step, ... up to hi (inclusive within step * 1e-9).
  std::vector<double> Values() const;
};

struct ScanOptions {
  std::array<ScanAxis, 2> axes;
  // Values of the parameters off the axes; empty leaves them free.
  std::array<std::optional<double>, 4> fixed;
  double budget = 0.0;
  DofMode mode = DofMode::kAsym;
  Metric metric = Metric::kSumOfSquares;
  int jobs = 0;
};

struct RegionScan {
  std::array<ScanAxis, 2> axes;
  std::array<std::vector<double>, 2> values;
  double budget = 0.0;
  // delta*(x, y), indexed [x][y]; +inf where the cell failed.
  Matrix delta_star;
  std::vector<std::vector<bool>> inside;
  std::vector<std::vector<std::string>> status;
  // Wall time of each cell solve in seconds.
  Matrix seconds;
  double total_seconds = 0.0;
};

// min-perturbation delta* with the entry structure and the two axis
// parameters pinned at every grid point. Cells whose solve fails record
// +inf and the status; the scan continues.
RegionScan ScanRegion(const ObservationSet& observations,
                      const ScanOptions& options,
                      const conic::Backend& backend);

// Same instance as one scan cell, without pinning the axis parameters.
PerturbationResult EntryMinPerturbation(
    const ObservationSet& observations, const ScanOptions& options,
    const std::array<std::optional<double>, 4>& pinned,
    const conic::Backend& backend);

// Cells as CSV rows "param1,param2,delta_star,inside" in x-major order.
std::string ScanCsv(const RegionScan& scan);
Json ScanManifest(const RegionScan& scan, const EntryGameParams& params);

// Writes <prefix>.csv and <prefix>.json. Throws IoError on failure.
void EmitOutputs(const RegionScan& scan, const EntryGameParams& params,
                 const std::string& prefix);

}  // namespace eqscope

#endif  // EQSCOPE_EXPERIMENTS_EXPERIMENTS_H_
