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

#ifndef EQSCOPE_CONIC_SIMPLEX_H_
#define EQSCOPE_CONIC_SIMPLEX_H_

#include <string>

#include "eqscope/conic/solver.h"

namespace eqscope::conic {

// Dense two-phase primal simplex with Bland's rule. Handles programs with
// linear constraints and a linear objective only; anything conic is
// answered with kUnsupported. Meant for small instances.
class SimplexBackend : public Backend {
 public:
  std::string name() const override { return "simplex"; }
  bool SupportsConic() const override { return false; }
  Solution Solve(const Program& program) const override;
};

}  // namespace eqscope::conic

#endif  // EQSCOPE_CONIC_SIMPLEX_H_
