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

// Command-line driver. Exit codes: 0 success, 1 usage or IO error,
// 2 infeasible, 3 solver trouble.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eqscope/conic/interior_point.h"
#include "eqscope/conic/simplex.h"
#include "eqscope/consistency/consistency.h"
#include "eqscope/core/errors.h"
#include "eqscope/core/json_io.h"
#include "eqscope/cournot/cournot.h"
#include "eqscope/degeneracy/degeneracy.h"
#include "eqscope/diameter/diameter.h"
#include "eqscope/experiments/experiments.h"
#include "eqscope/recovery/recovery.h"

namespace eqscope {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitTrouble = 3;

int ExitCode(conic::SolveStatus status) {
  switch (status) {
    case conic::SolveStatus::kOptimal:
      return kExitOk;
    case conic::SolveStatus::kInfeasible:
      return kExitInfeasible;
    default:
      return kExitTrouble;
  }
}

// JSON has no infinity; infinite values become null.
Json Number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

Json MatrixOrNull(const Matrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(Number(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

void Emit(const std::string& path, const Json& j) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
  } else {
    WriteJsonFile(path, j);
  }
}

struct CommonFlags {
  std::string input;
  std::string output;
  std::string metric = "d2";
  std::string backend = "ipm";
  int jobs = 0;
};

void AddCommon(CLI::App* cmd, CommonFlags& flags, bool input_required) {
  auto* in = cmd->add_option("--input", flags.input, "input JSON path");
  if (input_required) in->required();
  cmd->add_option("--output", flags.output, "output path (stdout if empty)");
  cmd->add_option("--metric", flags.metric, "d2 or dinf")
      ->check(CLI::IsMember({"d2", "dinf"}));
  cmd->add_option("--backend", flags.backend, "ipm or simplex (LP only)")
      ->check(CLI::IsMember({"ipm", "simplex"}));
  cmd->add_option("--jobs", flags.jobs, "worker threads (0: all cores)");
}

std::unique_ptr<conic::Backend> MakeBackend(const std::string& name) {
  if (name == "simplex") return std::make_unique<conic::SimplexBackend>();
  return std::make_unique<conic::InteriorPointBackend>();
}

Json PerturbationJson(const PerturbationResult& r) {
  Json perturbed = Json::array();
  for (const Game& g : r.perturbed) perturbed.push_back(GameToJson(g));
  Json out{{"status", conic::ToString(r.status)}};
  if (r.status == conic::SolveStatus::kOptimal) {
    out["delta_star"] = r.delta_star;
    out["game"] = GameToJson(r.game);
    out["perturbed_games"] = std::move(perturbed);
  } else {
    out["message"] = r.message;
  }
  return out;
}

std::optional<PropertySpec> ParseProperty(const std::string& name,
                                          double eps) {
  if (name.empty()) return std::nullopt;
  if (name == "zero-sum") return ZeroSum{};
  if (name == "eps-zero-sum") return EpsZeroSum{eps};
  if (name == "potential") return ExactPotential{};
  if (name == "entry") return EntryLinearParam();
  throw DomainError("unknown property: " + name);
}

ConsistencyInstance LoadInstance(const CommonFlags& flags,
                                 const std::string& entry_mode) {
  ConsistencyInstance inst;
  inst.observations = ObservationSetFromJson(ReadJsonFile(flags.input));
  inst.metric = MetricFromString(flags.metric);
  if (!entry_mode.empty()) {
    inst.hook = EntryStructureHook(DofModeFromString(entry_mode),
                                   inst.observations);
  }
  return inst;
}

// simulate-entry ------------------------------------------------------------

struct EntryFlags {
  EntryGameParams params;
  std::string noise = "asym";
  std::string model = "shifter";
};

void AddEntryFlags(CLI::App* cmd, EntryFlags& flags) {
  EntryGameParams& p = flags.params;
  cmd->add_option("--gamma1", p.gamma[0], "monopoly payoff of player 1");
  cmd->add_option("--gamma2", p.gamma[1], "monopoly payoff of player 2");
  cmd->add_option("--theta1", p.theta[0], "duopoly payoff of player 1");
  cmd->add_option("--theta2", p.theta[1], "duopoly payoff of player 2");
  cmd->add_option("--sigma", p.sigma, "unobserved noise sd");
  cmd->add_option("--sigma-s", p.sigma_s, "shifter sd");
  cmd->add_option("--l", p.l, "number of observations");
  cmd->add_option("--seed", p.seed, "RNG seed");
  cmd->add_option("--noise", flags.noise, "sym: one shock per player")
      ->check(CLI::IsMember({"sym", "asym"}));
  cmd->add_option("--model", flags.model, "partial_payoff, shifter or none")
      ->check(CLI::IsMember({"partial_payoff", "shifter", "none"}));
}

EntryObservations GenerateFromFlags(EntryFlags& flags) {
  flags.params.noise = DofModeFromString(flags.noise);
  return GenerateEntryObservations(flags.params,
                                   ObservationModelFromString(flags.model));
}

int RunSimulateEntry(EntryFlags& flags, const std::string& output,
                     const std::string& truth) {
  const EntryObservations gen = GenerateFromFlags(flags);
  Emit(output, ObservationSetToJson(gen.observations));
  if (!truth.empty()) {
    Json perturbed = Json::array();
    for (const Game& g : gen.perturbed) perturbed.push_back(GameToJson(g));
    WriteJsonFile(truth, Json{{"game", GameToJson(gen.game)},
                              {"perturbed_games", perturbed}});
  }
  return kExitOk;
}

// recover / property / diameter / bounds / degeneracy -----------------------

int RunRecover(const CommonFlags& flags, const std::string& property,
               double eps, const std::string& entry_mode, bool sparse) {
  ConsistencyInstance inst = LoadInstance(flags, entry_mode);
  inst.property = ParseProperty(property, eps);
  const auto backend = MakeBackend(flags.backend);
  PerturbationResult r;
  Json extra;
  if (sparse) {
    const SparseRecovery s = SparseSupportRecovery(inst, *backend);
    r = s.result;
    extra = MatrixToJson(s.observed);
  } else {
    r = MinPerturbation(inst, *backend);
  }
  Json out = PerturbationJson(r);
  if (sparse) out["observed_support"] = extra;
  Emit(flags.output, out);
  return ExitCode(r.status);
}

int RunProperty(const CommonFlags& flags, double budget,
                const std::string& entry_mode) {
  const ConsistencyInstance inst = LoadInstance(flags, entry_mode);
  const auto backend = MakeBackend(flags.backend);
  const double eps = PropertyThreshold(
      inst, [](double e) { return PropertySpec(EpsZeroSum{e}); }, budget,
      *backend);
  Emit(flags.output, Json{{"property", "eps-zero-sum"},
                          {"budget", budget},
                          {"epsilon_min", eps}});
  return kExitOk;
}

int RunDiameter(const CommonFlags& flags, double delta,
                const std::string& entry_mode) {
  ConsistencyInstance inst = LoadInstance(flags, entry_mode);
  inst.delta = delta;
  const auto backend = MakeBackend(flags.backend);
  DiameterOptions options;
  options.jobs = flags.jobs;
  const DiameterReport r = Diameter(inst, *backend, options);
  Json out{{"value", Number(r.value)},
           {"unbounded", r.unbounded},
           {"empty", r.empty},
           {"complete", r.complete},
           {"argmax", r.argmax},
           {"per_entry",
            {MatrixOrNull(r.per_entry[0]), MatrixOrNull(r.per_entry[1])}},
           {"diagnostics", r.diagnostics}};
  if (r.witnesses) {
    out["witnesses"] = {GameToJson(r.witnesses->first),
                        GameToJson(r.witnesses->second)};
  }
  Emit(flags.output, out);
  if (r.empty) return kExitInfeasible;
  return r.complete ? kExitOk : kExitTrouble;
}

int RunBounds(const CommonFlags& flags, const std::string& truth_path,
              double delta) {
  ConsistencyInstance inst = LoadInstance(flags, "");
  const auto backend = MakeBackend(flags.backend);
  const PerturbationResult r = MinPerturbation(inst, *backend);
  if (r.status != conic::SolveStatus::kOptimal) {
    Emit(flags.output, PerturbationJson(r));
    return ExitCode(r.status);
  }
  const Game truth = GameFromJson(ReadJsonFile(truth_path).at("game"));
  const ObservationMatrix e = SelectIndependentSubset(inst.observations);
  const RecoveryBoundCheck check =
      VerifyRecoveryBound(truth, r.game, e, delta, inst.metric);
  Emit(flags.output,
       Json{{"norm2", InducedNormInverse(e, InducedNorm::kTwo)},
            {"norminf", InducedNormInverse(e, InducedNorm::kInfinity)},
            {"condition", e.condition},
            {"rows", e.rows},
            {"lhs", check.lhs},
            {"rhs", check.rhs},
            {"ok", check.ok},
            {"direct_rhs", check.direct_rhs},
            {"direct_ok", check.direct_ok}});
  return kExitOk;
}

int RunDegeneracy(const CommonFlags& flags, int player, int points) {
  const ObservationSet obs =
      ObservationSetFromJson(ReadJsonFile(flags.input));
  const auto backend = MakeBackend(flags.backend);
  const double eps_star = DegeneracyThreshold(obs, *backend, player);
  const double top = eps_star > 0.0 ? 3.0 * eps_star : 1.0;
  Json curve = Json::array();
  int trouble = 0;
  for (int k = 0; k <= points; ++k) {
    const double eps = top * k / points;
    const StrictnessResult r = SolveStrictness(obs, eps, *backend, player);
    if (r.status != conic::SolveStatus::kOptimal) ++trouble;
    curve.push_back({eps, r.status == conic::SolveStatus::kOptimal
                              ? Json(r.value)
                              : Json(nullptr)});
  }
  const double eps0 = eps_star > 0.0 ? 1.5 * eps_star : 0.1;
  std::vector<double> grid;
  for (int k = 1; k <= 5; ++k) grid.push_back(eps0 * (1.0 + 0.25 * k));
  Json out{{"epsilon_star", eps_star}, {"P_curve", curve}};
  try {
    const EnvelopeReport env = EnvelopeCheck(obs, eps0, grid, *backend, player);
    out["envelope_ok"] = env.ok;
    out["envelope"] = {{"epsilon0", eps0},
                       {"p0", env.p0},
                       {"epsilon", env.epsilon},
                       {"P", env.value},
                       {"lower", env.lower},
                       {"upper", env.upper}};
  } catch (const DomainError& e) {
    out["envelope_ok"] = nullptr;
    out["envelope_error"] = e.what();
  }
  Emit(flags.output, out);
  return trouble > 0 ? kExitTrouble : kExitOk;
}

// cournot -------------------------------------------------------------------

Json VectorJson(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Vector VectorFromJson(const Json& j) {
  const std::vector<double> values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(),
                                  static_cast<Eigen::Index>(values.size()));
}

struct CournotInput {
  double alpha = 0.0;
  std::vector<Vector> observations;
};

// Accepts {"alpha", "observations": [[q..]..]} or a simulate output with
// "games"; `game` picks the game in the latter.
CournotInput LoadCournot(const std::string& path, int game, int l) {
  const Json j = ReadJsonFile(path);
  CournotInput in;
  in.alpha = j.at("alpha").get<double>();
  const Json& list = j.contains("games")
                         ? j.at("games").at(game).at("quantities")
                         : j.at("observations");
  for (const Json& q : list) in.observations.push_back(VectorFromJson(q));
  if (l > 0 && l < static_cast<int>(in.observations.size())) {
    in.observations.resize(l);
  }
  return in;
}

int RunCournotSimulate(const CournotSimParams& params,
                       const std::string& output) {
  Json games = Json::array();
  for (const CournotSimGame& g : SimulateCournot(params)) {
    Json perturbed = Json::array(), quantities = Json::array();
    for (const Vector& a : g.perturbed_costs) perturbed.push_back(VectorJson(a));
    for (const Vector& q : g.quantities) quantities.push_back(VectorJson(q));
    games.push_back({{"costs", VectorJson(g.costs)},
                     {"perturbed_costs", perturbed},
                     {"quantities", quantities}});
  }
  Emit(output, Json{{"alpha", params.alpha},
                    {"a_hat", params.a_hat},
                    {"sigma_game", params.sigma_game},
                    {"sigma_obs", params.sigma_obs},
                    {"seed", params.seed},
                    {"games", games}});
  return kExitOk;
}

int RunCournotRecover(const CommonFlags& flags, int game, int l, int degree) {
  const CournotInput in = LoadCournot(flags.input, game, l);
  const CournotInstance inst{in.observations, LinearPrice(in.alpha), degree,
                             MetricFromString(flags.metric)};
  const auto backend = MakeBackend(flags.backend);
  const CournotPerturbationResult r = CournotMinPerturbation(inst, *backend);
  Json out{{"status", conic::ToString(r.status)}};
  if (r.status == conic::SolveStatus::kOptimal) {
    out["delta_star"] = r.delta_star;
    out["coeffs"] = MatrixToJson(r.coeffs);
    Json perturbed = Json::array();
    for (const Matrix& c : r.perturbed) perturbed.push_back(MatrixToJson(c));
    out["perturbed_coeffs"] = perturbed;
  } else {
    out["message"] = r.message;
  }
  Emit(flags.output, out);
  return ExitCode(r.status);
}

int RunCournotDiameter(const CommonFlags& flags, int game, int l, int degree,
                       double delta) {
  const CournotInput in = LoadCournot(flags.input, game, l);
  const CournotInstance inst{in.observations, LinearPrice(in.alpha), degree,
                             MetricFromString(flags.metric), delta};
  const auto backend = MakeBackend(flags.backend);
  const CournotDiameterReport r =
      CournotDiameter(inst, *backend, {flags.jobs});
  Emit(flags.output, Json{{"value", Number(r.value)},
                          {"unbounded", r.unbounded},
                          {"empty", r.empty},
                          {"complete", r.complete},
                          {"argmax", r.argmax},
                          {"per_coeff", MatrixOrNull(r.per_coeff)},
                          {"diagnostics", r.diagnostics}});
  if (r.empty) return kExitInfeasible;
  return r.complete ? kExitOk : kExitTrouble;
}

// One CSV row per l: mean diameter and mean wall time over the games, with
// the d2 radius sigma_obs^2 chi2_level(n l).
int RunCournotSweep(const CommonFlags& flags, CournotSimParams params,
                    const std::vector<int>& ls, double level) {
  int max_l = 0;
  for (int l : ls) max_l = std::max(max_l, l);
  params.l = max_l;
  const std::vector<CournotSimGame> games = SimulateCournot(params);
  const auto backend = MakeBackend(flags.backend);
  std::ostringstream csv;
  csv << "l,delta,mean_diameter,mean_seconds\n";
  int code = kExitOk;
  for (int l : ls) {
    const double delta = ChiSquareDelta(params.n * l, level, params.sigma_obs);
    double diameter = 0.0, seconds = 0.0;
    for (const CournotSimGame& g : games) {
      const CournotInstance inst{
          std::vector<Vector>(g.quantities.begin(), g.quantities.begin() + l),
          LinearPrice(params.alpha), 1, Metric::kSumOfSquares, delta};
      const auto t0 = std::chrono::steady_clock::now();
      const CournotDiameterReport r =
          CournotDiameter(inst, *backend, {flags.jobs});
      seconds += std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
      if (!r.complete) code = kExitTrouble;
      diameter += r.value;
    }
    char row[160];
    std::snprintf(row, sizeof(row), "%d,%.10g,%.10g,%.6g\n", l, delta,
                  diameter / games.size(), seconds / games.size());
    csv << row;
  }
  if (flags.output.empty() || flags.output == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream out(flags.output);
    if (!out) throw IoError("cannot write " + flags.output);
    out << csv.str();
  }
  return code;
}

// scan ----------------------------------------------------------------------

ScanAxis ParseAxis(const std::string& spec) {
  // name:lo:hi:step
  std::vector<std::string> parts;
  std::stringstream in(spec);
  for (std::string part; std::getline(in, part, ':');) parts.push_back(part);
  if (parts.size() != 4) {
    throw DomainError("axis must read name:lo:hi:step, got " + spec);
  }
  return {EntryParamFromString(parts[0]), std::stod(parts[1]),
          std::stod(parts[2]), std::stod(parts[3])};
}

int RunScan(const CommonFlags& flags, EntryFlags& entry,
            const std::string& axis1, const std::string& axis2,
            const std::vector<std::string>& fixed, std::optional<double> budget,
            const std::string& mode, double level) {
  ObservationSet obs;
  if (!flags.input.empty()) {
    obs = ObservationSetFromJson(ReadJsonFile(flags.input));
    entry.params.l = obs.size();
  } else {
    obs = GenerateFromFlags(entry).observations;
  }
  ScanOptions options;
  options.axes = {ParseAxis(axis1), ParseAxis(axis2)};
  for (const std::string& f : fixed) {
    const size_t eq = f.find('=');
    if (eq == std::string::npos) throw DomainError("--fix wants name=value");
    options.fixed[EntryParamFromString(f.substr(0, eq))] =
        std::stod(f.substr(eq + 1));
  }
  options.mode = DofModeFromString(mode);
  options.metric = MetricFromString(flags.metric);
  options.budget = budget ? *budget
                          : EntryDelta(options.mode, obs.size(), level,
                                       entry.params.sigma);
  options.jobs = flags.jobs;
  const auto backend = MakeBackend(flags.backend);
  const RegionScan scan = ScanRegion(obs, options, *backend);
  if (flags.output.empty()) {
    std::cout << ScanCsv(scan);
  } else {
    EmitOutputs(scan, entry.params, flags.output);
  }
  for (const auto& row : scan.status) {
    for (const std::string& s : row) {
      if (s != "optimal") return kExitTrouble;
    }
  }
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"eqscope: games consistent with observed equilibrium play"};
  app.require_subcommand(1);
  int code = kExitOk;

  CommonFlags common;
  EntryFlags entry;
  std::string truth, property, entry_mode, mode = "asym", axis1, axis2;
  std::vector<std::string> fixed;
  double eps = 0.0, delta = 0.0, level = 0.99;
  double budget_value = 0.0;
  bool sparse = false;
  int player = 0, points = 10, game = 0, l = 0, degree = 1;
  CournotSimParams sim;
  std::vector<int> ls = {1, 10, 100};

  auto* simulate = app.add_subcommand("simulate-entry",
                                      "generate entry-game observations");
  AddEntryFlags(simulate, entry);
  simulate->add_option("--output", common.output, "observation JSON path");
  simulate->add_option("--truth", truth, "write generating games here");
  simulate->callback(
      [&] { code = RunSimulateEntry(entry, common.output, truth); });

  auto* recover = app.add_subcommand("recover", "min-perturbation recovery");
  AddCommon(recover, common, true);
  recover->add_option("--property", property,
                      "zero-sum, eps-zero-sum, potential or entry");
  recover->add_option("--eps", eps, "epsilon for eps-zero-sum");
  recover->add_option("--entry-structure", entry_mode, "sym or asym")
      ->check(CLI::IsMember({"sym", "asym"}));
  recover->add_flag("--sparse", sparse,
                    "push unobserved entries below observed ones");
  recover->callback([&] {
    code = RunRecover(common, property, eps, entry_mode, sparse);
  });

  auto* prop = app.add_subcommand("property",
                                  "least eps admitting an eps-zero-sum game");
  AddCommon(prop, common, true);
  prop->add_option("--budget", budget_value, "delta budget")->required();
  prop->add_option("--entry-structure", entry_mode, "sym or asym")
      ->check(CLI::IsMember({"sym", "asym"}));
  prop->callback(
      [&] { code = RunProperty(common, budget_value, entry_mode); });

  auto* diameter = app.add_subcommand("diameter", "consistent-set diameter");
  AddCommon(diameter, common, true);
  diameter->add_option("--delta", delta, "radius")->required();
  diameter->add_option("--entry-structure", entry_mode, "sym or asym")
      ->check(CLI::IsMember({"sym", "asym"}));
  diameter->callback([&] { code = RunDiameter(common, delta, entry_mode); });

  auto* bounds = app.add_subcommand("bounds", "recovery-bound check");
  AddCommon(bounds, common, true);
  bounds->add_option("--truth", truth, "JSON with the generating game")
      ->required();
  bounds->add_option("--delta", delta, "perturbation size")->required();
  bounds->callback([&] { code = RunBounds(common, truth, delta); });

  auto* degeneracy = app.add_subcommand("degeneracy",
                                        "strictness threshold and curve");
  AddCommon(degeneracy, common, true);
  degeneracy->add_option("--player", player, "0 or 1");
  degeneracy->add_option("--points", points, "curve points");
  degeneracy->callback(
      [&] { code = RunDegeneracy(common, player, points); });

  auto* cournot = app.add_subcommand("cournot", "Cournot cost recovery");
  cournot->require_subcommand(1);
  auto add_sim = [&](CLI::App* cmd) {
    cmd->add_option("--n", sim.n, "players");
    cmd->add_option("--alpha", sim.alpha, "price slope");
    cmd->add_option("--a-hat", sim.a_hat, "mean marginal cost");
    cmd->add_option("--sigma-game", sim.sigma_game, "cost sd");
    cmd->add_option("--sigma", sim.sigma_obs, "perturbation sd");
    cmd->add_option("--games", sim.n_games, "number of games");
    cmd->add_option("--seed", sim.seed, "RNG seed");
  };
  auto* csim = cournot->add_subcommand("simulate", "simulate observations");
  add_sim(csim);
  csim->add_option("--l", sim.l, "observations per game");
  csim->add_option("--output", common.output, "output JSON");
  csim->callback([&] { code = RunCournotSimulate(sim, common.output); });
  auto add_cournot_input = [&](CLI::App* cmd) {
    AddCommon(cmd, common, true);
    cmd->add_option("--game", game, "game index in a simulate file");
    cmd->add_option("--l", l, "use the first l observations");
    cmd->add_option("--degree", degree, "cost polynomial degree");
  };
  auto* crec = cournot->add_subcommand("recover", "min-perturbation costs");
  add_cournot_input(crec);
  crec->callback(
      [&] { code = RunCournotRecover(common, game, l, degree); });
  auto* cdiam = cournot->add_subcommand("diameter", "coefficient diameter");
  add_cournot_input(cdiam);
  cdiam->add_option("--delta", delta, "radius")->required();
  cdiam->callback(
      [&] { code = RunCournotDiameter(common, game, l, degree, delta); });
  auto* csweep = cournot->add_subcommand(
      "sweep", "CSV of mean diameter and time against l");
  add_sim(csweep);
  csweep->add_option("--ls", ls, "observation counts")->delimiter(',');
  csweep->add_option("--level", level, "chi-square level for delta");
  csweep->add_option("--output", common.output, "CSV path");
  csweep->add_option("--backend", common.backend, "ipm");
  csweep->add_option("--jobs", common.jobs, "worker threads");
  csweep->callback([&] { code = RunCournotSweep(common, sim, ls, level); });

  std::optional<double> budget;
  auto* scan = app.add_subcommand("scan", "entry-game parameter region");
  AddEntryFlags(scan, entry);
  scan->add_option("--input", common.input,
                   "observation JSON (simulated from flags if absent)");
  scan->add_option("--output", common.output,
                   "output prefix for .csv and .json (CSV to stdout if empty)");
  scan->add_option("--metric", common.metric, "d2 or dinf")
      ->check(CLI::IsMember({"d2", "dinf"}));
  scan->add_option("--jobs", common.jobs, "worker threads");
  scan->add_option("--axis1", axis1, "name:lo:hi:step")
      ->default_val("theta1:-2.4:0:0.1");
  scan->add_option("--axis2", axis2, "name:lo:hi:step")
      ->default_val("theta2:-2.4:0:0.1");
  scan->add_option("--fix", fixed, "name=value for off-axis parameters")
      ->default_val(std::vector<std::string>{"gamma1=0", "gamma2=0"});
  scan->add_option("--budget", budget, "delta budget (chi-square if absent)");
  scan->add_option("--level", level, "chi-square level");
  scan->add_option("--dof-mode", mode, "sym or asym")
      ->check(CLI::IsMember({"sym", "asym"}));
  scan->callback([&] {
    code = RunScan(common, entry, axis1, axis2, fixed, budget, mode, level);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int parse_code = app.exit(e);
    return parse_code == 0 ? kExitOk : kExitError;
  } catch (const NotIdentifiableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const SolverTroubleError& e) {
    std::cerr << "solver trouble: " << e.what() << "\n";
    return kExitTrouble;
  } catch (const BracketError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return code;
}

}  // namespace
}  // namespace eqscope

int main(int argc, char** argv) { return eqscope::Main(argc, argv); }
