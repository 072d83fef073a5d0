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

#ifndef EQSCOPE_CONIC_STANDARD_FORM_H_
#define EQSCOPE_CONIC_STANDARD_FORM_H_

#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "eqscope/conic/program.h"

namespace eqscope::conic {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

// K = R^nonneg x Q^{soc[0]} x ... x S^{psd[0]} x ...; PSD blocks use the
// scaled lower-triangle vectorization (column by column, off-diagonals
// multiplied by sqrt(2)).
struct ConeDims {
  int nonneg = 0;
  std::vector<int> soc;
  std::vector<int> psd;

  int Size() const;
  // Rank of the cone: nonneg + #soc + sum of PSD orders.
  int Degree() const;
};

// min c'x + c_offset  s.t.  Ax = b,  Gx + s = h,  s in K.
// The first `num_original` columns are the Program's scalars; the rest are
// auxiliary. objective_sign is -1 when the Program maximizes (c is negated).
struct StandardForm {
  int num_original = 0;
  Eigen::VectorXd c;
  double c_offset = 0.0;
  double objective_sign = 1.0;
  SparseMatrix A;
  Eigen::VectorXd b;
  SparseMatrix G;
  Eigen::VectorXd h;
  ConeDims cones;

  int num_vars() const { return static_cast<int>(c.size()); }
};

struct LoweringOptions {
  // Second-order cones with more entries than this are rewritten as
  // three-dimensional rotated cones over auxiliary variables.
  int soc_split_threshold = 16;
};

StandardForm Lower(const Program& program, const LoweringOptions& options = {});

}  // namespace eqscope::conic

#endif  // EQSCOPE_CONIC_STANDARD_FORM_H_
