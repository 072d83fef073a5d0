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

#ifndef EQSCOPE_CONIC_SOLVER_H_
#define EQSCOPE_CONIC_SOLVER_H_

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "eqscope/conic/program.h"
#include "eqscope/core/game.h"

namespace eqscope::conic {

enum class SolveStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kNumericalTrouble,
  kUnsupported,
};

std::string ToString(SolveStatus status);

// Thrown by Solve() when Program::Validate() reports diagnostics.
class InvalidProgramError : public std::invalid_argument {
 public:
  InvalidProgramError(const std::string& what,
                      std::vector<std::string> diagnostics)
      : std::invalid_argument(what), diagnostics_(std::move(diagnostics)) {}
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

struct Solution {
  SolveStatus status = SolveStatus::kNumericalTrouble;
  // One value per Program scalar column (empty unless kOptimal).
  std::vector<double> x;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double dual_objective = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  std::string message;

  bool ok() const { return status == SolveStatus::kOptimal; }
  double Value(const LinExpr& e) const { return e.Evaluate(x); }
  double Value(const Variable& v) const { return x.at(v.offset()); }
  Matrix MatrixValue(const Variable& v) const;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  // False for LP-only backends; they answer kUnsupported on conic programs.
  virtual bool SupportsConic() const = 0;
  virtual Solution Solve(const Program& program) const = 0;
};

// Largest violation of any constraint of `program` at x (0 if feasible).
double MaxViolation(const Program& program, std::span<const double> x);
// Objective of `program` evaluated at x, squares included.
double EvaluateObjective(const Program& program, std::span<const double> x);

inline constexpr double kResidualTolerance = 1e-6;

// Validates, dispatches to `backend`, then re-substitutes: an optimal
// answer with a constraint residual above kResidualTolerance is reported as
// kNumericalTrouble.
Solution Solve(const Program& program, const Backend& backend);

}  // namespace eqscope::conic

#endif  // EQSCOPE_CONIC_SOLVER_H_
