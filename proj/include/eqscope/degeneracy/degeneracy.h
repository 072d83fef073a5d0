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

#ifndef EQSCOPE_DEGENERACY_DEGENERACY_H_
#define EQSCOPE_DEGENERACY_DEGENERACY_H_

#include <string>
#include <vector>

#include "eqscope/conic/solver.h"
#include "eqscope/core/game.h"

namespace eqscope {

// Deviation vector for the recommendation i -> ip of the row player:
// <v, G> = sum_j e(i, j) (G(ip, j) - G(i, j)), so <v, G> <= 0 is the CE
// inequality for that deviation.
struct TildeVector {
  int i = 0;
  int ip = 0;
  Matrix v;
  bool IsZero() const { return v.isZero(0.0); }
};

// All ordered pairs i != ip, in lexicographic order.
std::vector<TildeVector> BuildTildeVectors(const CorrelatedEquilibrium& e);

// The observed equilibria as seen by `player`: unchanged for player 0,
// transposed for player 1 so that the player always picks the row.
std::vector<CorrelatedEquilibrium> PlayerView(const ObservationSet& obs,
                                              int player);

// Appends zero-probability columns until there are at least as many columns
// as rows. Zero columns leave every deviation vector's support unchanged.
std::vector<CorrelatedEquilibrium> PadColumns(
    const std::vector<CorrelatedEquilibrium>& equilibria);

struct StrictnessResult {
  conic::SolveStatus status = conic::SolveStatus::kNumericalTrouble;
  // P(eps) = min sum_k ||G^k - G||_2^2.
  double value = 0.0;
  // Dual objective reported by the backend.
  double dual_value = 0.0;
  Matrix game;
  std::vector<Matrix> perturbed;
  // Slack of each nonzero deviation vector, per observation, in
  // BuildTildeVectors order.
  std::vector<std::vector<double>> slack;
  std::string message;
};

// P(eps): least total squared perturbation that makes the observations
// strict correlated equilibria with total slack eps, over 0 <= G <= 1.
StrictnessResult SolveStrictness(const ObservationSet& obs, double epsilon,
                                 const conic::Backend& backend,
                                 int player = 0);
StrictnessResult SolveStrictness(
    const std::vector<CorrelatedEquilibrium>& equilibria, double epsilon,
    const conic::Backend& backend);

// eps* = -min sum_{k,i,ip} <v^k_{i,ip}, G> over 0 <= G <= 1 with every
// deviation inequality satisfied.
double DegeneracyThreshold(const ObservationSet& obs,
                           const conic::Backend& backend, int player = 0);
double DegeneracyThreshold(
    const std::vector<CorrelatedEquilibrium>& equilibria,
    const conic::Backend& backend);

// Per observation: whether the nonzero rows of e are linearly independent.
std::vector<bool> CheckSlater(const ObservationSet& obs, int player = 0,
                              double tol = 1e-10);

// Lower and upper envelopes through (eps0, p0), with m the side of the
// (padded) square game and l the number of observations.
double EnvelopeLower(double epsilon, double epsilon0, double p0);
double EnvelopeUpper(double epsilon, double epsilon0, double p0, int l,
                     int m);

struct EnvelopeReport {
  bool ok = false;
  // P is nondecreasing along the grid.
  bool monotone = false;
  double p0 = 0.0;
  std::vector<double> epsilon;
  std::vector<double> value;
  std::vector<double> lower;
  std::vector<double> upper;
};

// Solves P on the grid and checks lower - 1e-6 <= P <= upper + 1e-6.
// Throws DomainError when P(eps0) is zero.
EnvelopeReport EnvelopeCheck(const ObservationSet& obs, double epsilon0,
                             const std::vector<double>& grid,
                             const conic::Backend& backend, int player = 0);

}  // namespace eqscope

#endif  // EQSCOPE_DEGENERACY_DEGENERACY_H_
