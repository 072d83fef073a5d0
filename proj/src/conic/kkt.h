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

#ifndef EQSCOPE_SRC_CONIC_KKT_H_
#define EQSCOPE_SRC_CONIC_KKT_H_

#include <vector>

#include "cones.h"
#include "eqscope/conic/standard_form.h"

namespace eqscope::conic::internal {

// Up-looking LDL' factorization of a permuted upper-triangular CSC matrix
// with dynamic regularization: pivots whose sign disagrees with `sign` or
// whose magnitude falls below `eps` are replaced by sign * delta.
class SparseLdl {
 public:
  bool Factor(int n, const std::vector<int>& col_ptr,
              const std::vector<int>& row_idx,
              const std::vector<double>& values,
              const std::vector<double>& sign, double eps, double delta);
  void SolveInPlace(Vector& x) const;
  int num_regularized() const { return num_regularized_; }

 private:
  int n_ = 0;
  std::vector<int> lp_;
  std::vector<int> li_;
  std::vector<double> lx_;
  std::vector<double> d_inv_;
  int num_regularized_ = 0;
};

// Solves [0 A' G'; A 0 0; G 0 -W'W] [x; y; z] = rhs with a regularized
// factorization refined against the exact matrix.
class KktSolver {
 public:
  KktSolver(const SparseMatrix& a, const SparseMatrix& g, const Cones& cones);

  bool Factor(const Cones& cones);
  Vector Solve(const Cones& cones, const Vector& rhs) const;

 private:
  Vector Multiply(const Cones& cones, const Vector& v) const;

  const SparseMatrix& a_;
  const SparseMatrix& g_;
  SparseMatrix at_;
  SparseMatrix gt_;
  int n_, p_, m_, dim_;
  std::vector<int> new_of_old_;
  std::vector<int> old_of_new_;
  std::vector<Triplet> fixed_;
  std::vector<double> sign_;
  SparseLdl ldl_;
};

}  // namespace eqscope::conic::internal

#endif  // EQSCOPE_SRC_CONIC_KKT_H_
