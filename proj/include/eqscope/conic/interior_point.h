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

#ifndef EQSCOPE_CONIC_INTERIOR_POINT_H_
#define EQSCOPE_CONIC_INTERIOR_POINT_H_

#include <string>

#include <Eigen/Dense>

#include "eqscope/conic/solver.h"
#include "eqscope/conic/standard_form.h"

namespace eqscope::conic {

struct InteriorPointOptions {
  double feastol = 1e-9;
  double abstol = 1e-9;
  double reltol = 1e-9;
  double feastol_reduced = 1e-6;
  double abstol_reduced = 1e-7;
  double reltol_reduced = 1e-6;
  int max_iterations = 120;
  int equilibration_passes = 12;
  LoweringOptions lowering;
  bool verbose = false;
};

struct StandardSolution {
  SolveStatus status = SolveStatus::kNumericalTrouble;
  Eigen::VectorXd x, y, z, s;
  double primal_objective = 0.0;  // c'x + c_offset
  double dual_objective = 0.0;    // -b'y - h'z + c_offset
  int iterations = 0;
  std::string message;
};

// Homogeneous self-dual primal-dual interior-point method with
// Nesterov-Todd scaling and Mehrotra predictor-corrector steps.
StandardSolution SolveStandardForm(const StandardForm& problem,
                                   const InteriorPointOptions& options = {});

class InteriorPointBackend : public Backend {
 public:
  explicit InteriorPointBackend(InteriorPointOptions options = {})
      : options_(options) {}

  std::string name() const override { return "interior-point"; }
  bool SupportsConic() const override { return true; }
  Solution Solve(const Program& program) const override;

 private:
  InteriorPointOptions options_;
};

}  // namespace eqscope::conic

#endif  // EQSCOPE_CONIC_INTERIOR_POINT_H_
