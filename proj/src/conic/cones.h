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

#ifndef EQSCOPE_SRC_CONIC_CONES_H_
#define EQSCOPE_SRC_CONIC_CONES_H_

#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "eqscope/conic/standard_form.h"

namespace eqscope::conic::internal {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Triplet = Eigen::Triplet<double, int>;

Matrix SvecToMat(const double* v, int n);
void MatToSvec(const Matrix& m, double* v);

// Jordan algebra and Nesterov-Todd scaling on a product cone.
class Cones {
 public:
  explicit Cones(const ConeDims& dims);

  int size() const { return size_; }
  int degree() const { return degree_; }

  Vector Identity() const;
  // Positive iff u is in the interior of K.
  double MinEigenvalue(const Vector& u) const;
  // Largest alpha with u + alpha*du in K (infinity if unbounded); u interior.
  double MaxStep(const Vector& u, const Vector& du) const;

  // Computes W with W z = W^{-T} s = lambda. Returns false if s or z is not
  // in the interior of K.
  bool UpdateScaling(const Vector& s, const Vector& z);
  const Vector& lambda() const { return lambda_; }

  Vector ApplyW(const Vector& v) const;
  Vector ApplyWt(const Vector& v) const;
  Vector ApplyWinvT(const Vector& v) const;
  // Appends -W'W (both triangles) at rows/cols offset + [0, size).
  void AppendNegWtW(int offset, std::vector<Triplet>& out) const;

  Vector Product(const Vector& u, const Vector& v) const;
  // Solves lambda o xi = d for xi with the current scaling point lambda.
  Vector LambdaSolve(const Vector& d) const;

 private:
  struct SocScaling {
    double eta = 1.0;
    Vector w;  // wbar, with w0^2 - ||w1||^2 = 1
  };
  struct PsdScaling {
    Matrix r;
    Matrix r_inv;
    Vector sigma;
  };

  ConeDims dims_;
  int size_ = 0;
  int degree_ = 0;
  std::vector<int> soc_start_;
  std::vector<int> psd_start_;
  Vector lp_w_;  // sqrt(s/z)
  std::vector<SocScaling> soc_;
  std::vector<PsdScaling> psd_;
  Vector lambda_;
};

}  // namespace eqscope::conic::internal

#endif  // EQSCOPE_SRC_CONIC_CONES_H_
