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

#include "eqscope/experiments/experiments.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "eqscope/core/errors.h"
#include "eqscope/util/parallel.h"
#include "eqscope/util/rng.h"

namespace eqscope {
namespace {

constexpr int kMaxGammaIterations = 100000;

double GammaSeries(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxGammaIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw SolverTroubleError("incomplete gamma series did not converge");
}

// Upper tail Q(a, x) by the modified Lentz continued fraction.
double GammaContinuedFraction(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxGammaIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) {
      return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
  }
  throw SolverTroubleError("incomplete gamma fraction did not converge");
}

std::string FormatNumber(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

double RegularizedGammaP(double a, double x) {
  if (!(a > 0.0)) throw DomainError("incomplete gamma needs a > 0");
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) return GammaSeries(a, x);
  return 1.0 - GammaContinuedFraction(a, x);
}

double ChiSquareQuantile(int dof, double level) {
  if (dof < 1) throw DomainError("chi-square needs dof >= 1");
  if (!(level > 0.0 && level < 1.0)) {
    throw DomainError("chi-square level must lie in (0, 1)");
  }
  const double a = 0.5 * dof;
  auto cdf = [a](double x) { return RegularizedGammaP(a, 0.5 * x); };
  double lo = 0.0;
  double hi = std::max(1.0, 2.0 * dof);
  while (cdf(hi) < level) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (cdf(mid) < level) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double ChiSquareDelta(int dof, double level, double sigma) {
  return sigma * sigma * ChiSquareQuantile(dof, level);
}

std::string ToString(DofMode mode) {
  return mode == DofMode::kSym ? "sym" : "asym";
}

DofMode DofModeFromString(const std::string& name) {
  if (name == "sym") return DofMode::kSym;
  if (name == "asym") return DofMode::kAsym;
  throw DomainError("unknown dof mode: " + name);
}

double EntryDelta(DofMode mode, int l, double level, double sigma) {
  if (mode == DofMode::kSym) return 2.0 * ChiSquareDelta(2 * l, level, sigma);
  return ChiSquareDelta(4 * l, level, sigma);
}

void EntryGameParams::Validate() const {
  for (int p = 0; p < 2; ++p) {
    if (!(gamma[p] >= 0.0)) throw DomainError("gamma must be nonnegative");
    if (!(theta[p] <= gamma[p])) {
      throw DomainError("theta must not exceed gamma");
    }
  }
  if (!(sigma >= 0.0) || !(sigma_s >= 0.0)) {
    throw DomainError("standard deviations must be nonnegative");
  }
  if (l < 1) throw DomainError("entry simulation needs l >= 1");
}

Game EntryGame(const std::array<double, 2>& gamma,
               const std::array<double, 2>& theta) {
  Game game = Game::Zero(2, 2);
  game.mutable_payoff(0)(1, 0) = gamma[0];
  game.mutable_payoff(0)(1, 1) = theta[0];
  game.mutable_payoff(1)(0, 1) = gamma[1];
  game.mutable_payoff(1)(1, 1) = theta[1];
  return game;
}

bool IsEntryPayoff(int player, int i, int j) {
  return (player == 0 ? i : j) == 1;
}

EntryObservations GenerateEntryObservations(const EntryGameParams& params,
                                            ObservationModel model) {
  params.Validate();
  EntryObservations out;
  out.game = EntryGame(params.gamma, params.theta);
  std::vector<Observation> list;
  for (int k = 0; k < params.l; ++k) {
    std::mt19937_64 rng = StreamRng(params.seed, {static_cast<uint64_t>(k)});
    std::normal_distribution<double> normal(0.0, 1.0);
    Game shifter = Game::Zero(2, 2);
    Game noise = Game::Zero(2, 2);
    for (int p = 0; p < 2; ++p) {
      const double shared = params.sigma * normal(rng);
      for (int other = 0; other < 2; ++other) {
        const int i = p == 0 ? 1 : other;
        const int j = p == 0 ? other : 1;
        if (model == ObservationModel::kPayoffShifter) {
          shifter.mutable_payoff(p)(i, j) = params.sigma_s * normal(rng);
        }
        noise.mutable_payoff(p)(i, j) = params.noise == DofMode::kSym
                                            ? shared
                                            : params.sigma * normal(rng);
      }
    }
    const Game perturbed = out.game + shifter + noise;
    const std::vector<CorrelatedEquilibrium> nash = NashEquilibria2x2(perturbed);
    if (nash.empty()) throw SimulationError("entry game without equilibrium");
    std::uniform_int_distribution<size_t> pick(0, nash.size() - 1);
    Observation obs;
    obs.equilibrium = nash[pick(rng)];
    if (model == ObservationModel::kPartialPayoff) {
      const Matrix& e = obs.equilibrium.probs();
      obs.payoff_value = std::array<double, 2>{
          e.cwiseProduct(perturbed.payoff(0)).sum(),
          e.cwiseProduct(perturbed.payoff(1)).sum()};
    } else if (model == ObservationModel::kPayoffShifter) {
      obs.shifter = shifter;
    }
    list.push_back(std::move(obs));
    out.perturbed.push_back(perturbed);
    out.noise.push_back(noise);
  }
  out.observations = ObservationSet(model, std::move(list));
  return out;
}

PerturbationHook EntryStructureHook(DofMode mode,
                                    const ObservationSet& observations,
                                    bool base_zeros) {
  std::vector<Game> shifters;
  for (const Observation& obs : observations.observations()) {
    shifters.push_back(obs.shifter ? *obs.shifter : Game::Zero(2, 2));
  }
  return [mode, shifters, base_zeros](conic::Program& program,
                                      const GameVariables& game,
                                      std::span<const GameVariables> perturbed) {
    if (game.m1() != 2 || game.m2() != 2) {
      throw ShapeError("entry structure needs a 2x2 game");
    }
    for (int p = 0; p < 2; ++p) {
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          if (IsEntryPayoff(p, i, j)) continue;
          if (base_zeros) program.AddEqual(game(p, i, j), 0.0);
          for (const GameVariables& gk : perturbed) {
            program.AddEqual(gk(p, i, j), 0.0);
          }
        }
      }
    }
    if (mode != DofMode::kSym) return;
    for (size_t k = 0; k < perturbed.size(); ++k) {
      const Game& beta = shifters.at(k);
      for (int p = 0; p < 2; ++p) {
        // Entry payoffs (i, j) and (i2, j2) against an absent and a present
        // rival.
        const int i = p == 0 ? 1 : 0, j = p == 0 ? 0 : 1;
        const int i2 = 1, j2 = 1;
        program.AddEqual(
            perturbed[k](p, i, j) - game(p, i, j) -
                conic::LinExpr(beta.payoff(p)(i, j)),
            perturbed[k](p, i2, j2) - game(p, i2, j2) -
                conic::LinExpr(beta.payoff(p)(i2, j2)));
      }
    }
  };
}

std::string EntryParamName(int param) {
  switch (param) {
    case kGamma1:
      return "gamma1";
    case kTheta1:
      return "theta1";
    case kGamma2:
      return "gamma2";
    case kTheta2:
      return "theta2";
  }
  throw DomainError("unknown entry parameter " + std::to_string(param));
}

int EntryParamFromString(const std::string& name) {
  for (int p = 0; p < 4; ++p) {
    if (EntryParamName(p) == name) return p;
  }
  throw DomainError("unknown entry parameter: " + name);
}

LinearParam EntryLinearParam(
    const std::array<std::optional<double>, 4>& pinned) {
  LinearParam param;
  for (int p = 0; p < 2; ++p) {
    param.offset[p] = Matrix::Zero(2, 2);
    param.basis[p].assign(4, Matrix::Zero(2, 2));
  }
  param.basis[0][kGamma1](1, 0) = 1.0;
  param.basis[0][kTheta1](1, 1) = 1.0;
  param.basis[1][kGamma2](0, 1) = 1.0;
  param.basis[1][kTheta2](1, 1) = 1.0;
  param.pinned.assign(pinned.begin(), pinned.end());
  return param;
}

std::vector<double> ScanAxis::Values() const {
  if (!(step > 0.0) || !(hi >= lo)) {
    throw DomainError("scan axis needs step > 0 and hi >= lo");
  }
  const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> values;
  for (int i = 0; i < count; ++i) values.push_back(lo + i * step);
  return values;
}

PerturbationResult EntryMinPerturbation(
    const ObservationSet& observations, const ScanOptions& options,
    const std::array<std::optional<double>, 4>& pinned,
    const conic::Backend& backend) {
  ConsistencyInstance inst;
  inst.observations = observations;
  inst.metric = options.metric;
  inst.property = EntryLinearParam(pinned);
  inst.hook = EntryStructureHook(options.mode, observations, false);
  return MinPerturbation(inst, backend);
}

RegionScan ScanRegion(const ObservationSet& observations,
                      const ScanOptions& options,
                      const conic::Backend& backend) {
  if (options.axes[0].param == options.axes[1].param) {
    throw DomainError("scan axes must differ");
  }
  RegionScan scan;
  scan.axes = options.axes;
  scan.budget = options.budget;
  for (int a = 0; a < 2; ++a) scan.values[a] = options.axes[a].Values();
  const int nx = static_cast<int>(scan.values[0].size());
  const int ny = static_cast<int>(scan.values[1].size());
  scan.delta_star = Matrix::Constant(nx, ny,
                                     std::numeric_limits<double>::infinity());
  scan.seconds = Matrix::Zero(nx, ny);
  scan.inside.assign(nx, std::vector<bool>(ny, false));
  scan.status.assign(nx, std::vector<std::string>(ny));
  const auto start = std::chrono::steady_clock::now();
  ParallelFor(nx * ny, options.jobs, [&](int cell) {
    const int x = cell / ny;
    const int y = cell % ny;
    std::array<std::optional<double>, 4> pinned = options.fixed;
    pinned[options.axes[0].param] = scan.values[0][x];
    pinned[options.axes[1].param] = scan.values[1][y];
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const PerturbationResult r =
          EntryMinPerturbation(observations, options, pinned, backend);
      scan.status[x][y] = ToString(r.status);
      if (r.status == conic::SolveStatus::kOptimal) {
        scan.delta_star(x, y) = r.delta_star;
      }
    } catch (const std::exception& e) {
      scan.status[x][y] = std::string("error: ") + e.what();
    }
    scan.seconds(x, y) = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
  });
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      scan.inside[x][y] = scan.delta_star(x, y) <= options.budget;
    }
  }
  scan.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return scan;
}

std::string ScanCsv(const RegionScan& scan) {
  std::ostringstream out;
  out << EntryParamName(scan.axes[0].param) << ","
      << EntryParamName(scan.axes[1].param) << ",delta_star,inside\n";
  for (size_t x = 0; x < scan.values[0].size(); ++x) {
    for (size_t y = 0; y < scan.values[1].size(); ++y) {
      out << FormatNumber(scan.values[0][x]) << ","
          << FormatNumber(scan.values[1][y]) << ","
          << FormatNumber(scan.delta_star(x, y)) << ","
          << (scan.inside[x][y] ? 1 : 0) << "\n";
    }
  }
  return out.str();
}

Json ScanManifest(const RegionScan& scan, const EntryGameParams& params) {
  Json axes = Json::array();
  for (int a = 0; a < 2; ++a) {
    axes.push_back({{"param", EntryParamName(scan.axes[a].param)},
                    {"lo", scan.axes[a].lo},
                    {"hi", scan.axes[a].hi},
                    {"step", scan.axes[a].step},
                    {"values", scan.values[a]}});
  }
  Json status = Json::array();
  for (const auto& row : scan.status) status.push_back(row);
  return Json{{"axes", axes},
              {"budget", scan.budget},
              {"seed", params.seed},
              {"params",
               {{"gamma", params.gamma},
                {"theta", params.theta},
                {"sigma", params.sigma},
                {"sigma_s", params.sigma_s},
                {"l", params.l},
                {"noise", ToString(params.noise)}}},
              {"status", status},
              {"timings",
               {{"total_seconds", scan.total_seconds},
                {"cell_seconds", MatrixToJson(scan.seconds)}}}};
}

void EmitOutputs(const RegionScan& scan, const EntryGameParams& params,
                 const std::string& prefix) {
  {
    std::ofstream csv(prefix + ".csv", std::ios::binary);
    if (!csv) throw IoError("cannot write " + prefix + ".csv");
    csv << ScanCsv(scan);
    if (!csv) throw IoError("write failed: " + prefix + ".csv");
  }
  WriteJsonFile(prefix + ".json", ScanManifest(scan, params));
}

}  // namespace eqscope
