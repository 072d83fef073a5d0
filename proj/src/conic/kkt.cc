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

#include "kkt.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/OrderingMethods>

namespace eqscope::conic::internal {
namespace {

constexpr double kStaticReg = 1e-8;
constexpr double kDynamicEps = 1e-13;
constexpr double kDynamicDelta = 1e-7;
constexpr int kMaxRefinement = 12;

}  // namespace

bool SparseLdl::Factor(int n, const std::vector<int>& col_ptr,
                       const std::vector<int>& row_idx,
                       const std::vector<double>& values,
                       const std::vector<double>& sign, double eps,
                       double delta) {
  n_ = n;
  num_regularized_ = 0;
  std::vector<int> etree(n, -1);
  std::vector<int> lnz(n, 0);
  std::vector<int> work(n, -1);
  for (int j = 0; j < n; ++j) {
    work[j] = j;
    for (int p = col_ptr[j]; p < col_ptr[j + 1]; ++p) {
      int i = row_idx[p];
      if (i > j) return false;
      while (work[i] != j) {
        if (etree[i] == -1) etree[i] = j;
        ++lnz[i];
        work[i] = j;
        i = etree[i];
      }
    }
  }
  lp_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) lp_[i + 1] = lp_[i] + lnz[i];
  li_.assign(lp_[n], 0);
  lx_.assign(lp_[n], 0.0);
  d_inv_.assign(n, 0.0);

  std::vector<double> d(n, 0.0);
  std::vector<double> y_vals(n, 0.0);
  std::vector<char> y_marker(n, 0);
  std::vector<int> y_idx(n);
  std::vector<int> elim(n);
  std::vector<int> next_space(lp_.begin(), lp_.end() - 1);

  auto regularize = [&](int k) {
    if (!std::isfinite(d[k])) return false;
    if (d[k] * sign[k] <= eps) {
      d[k] = sign[k] * delta;
      ++num_regularized_;
    }
    d_inv_[k] = 1.0 / d[k];
    return true;
  };

  for (int k = 0; k < n; ++k) {
    int nnz_y = 0;
    d[k] = 0.0;
    for (int p = col_ptr[k]; p < col_ptr[k + 1]; ++p) {
      const int b = row_idx[p];
      if (b == k) {
        d[k] = values[p];
        continue;
      }
      y_vals[b] = values[p];
      int next = b;
      if (!y_marker[next]) {
        y_marker[next] = 1;
        elim[0] = next;
        int nnz_e = 1;
        next = etree[b];
        while (next != -1 && next < k) {
          if (y_marker[next]) break;
          y_marker[next] = 1;
          elim[nnz_e++] = next;
          next = etree[next];
        }
        while (nnz_e) y_idx[nnz_y++] = elim[--nnz_e];
      }
    }
    for (int t = nnz_y - 1; t >= 0; --t) {
      const int c = y_idx[t];
      const int tmp = next_space[c];
      const double yc = y_vals[c];
      for (int j = lp_[c]; j < tmp; ++j) y_vals[li_[j]] -= lx_[j] * yc;
      li_[tmp] = k;
      lx_[tmp] = yc * d_inv_[c];
      d[k] -= yc * lx_[tmp];
      ++next_space[c];
      y_vals[c] = 0.0;
      y_marker[c] = 0;
    }
    if (!regularize(k)) return false;
  }
  return true;
}

void SparseLdl::SolveInPlace(Vector& x) const {
  for (int i = 0; i < n_; ++i) {
    const double xi = x(i);
    for (int j = lp_[i]; j < lp_[i + 1]; ++j) x(li_[j]) -= lx_[j] * xi;
  }
  for (int i = 0; i < n_; ++i) x(i) *= d_inv_[i];
  for (int i = n_ - 1; i >= 0; --i) {
    double xi = x(i);
    for (int j = lp_[i]; j < lp_[i + 1]; ++j) xi -= lx_[j] * x(li_[j]);
    x(i) = xi;
  }
}

KktSolver::KktSolver(const SparseMatrix& a, const SparseMatrix& g,
                     const Cones& cones)
    : a_(a), g_(g), at_(a.transpose()), gt_(g.transpose()) {
  n_ = static_cast<int>(a.cols());
  p_ = static_cast<int>(a.rows());
  m_ = static_cast<int>(g.rows());
  dim_ = n_ + p_ + m_;

  // Upper-triangle entries that do not depend on the scaling.
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      fixed_.emplace_back(it.col(), n_ + it.row(), it.value());
    }
  }
  for (int k = 0; k < g.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(g, k); it; ++it) {
      fixed_.emplace_back(it.col(), n_ + p_ + it.row(), it.value());
    }
  }
  for (int i = 0; i < n_; ++i) fixed_.emplace_back(i, i, kStaticReg);
  for (int i = 0; i < p_ + m_; ++i) {
    fixed_.emplace_back(n_ + i, n_ + i, -kStaticReg);
  }

  // Fill-reducing ordering from the full pattern, scaling block included.
  std::vector<Triplet> pattern(fixed_);
  std::vector<Triplet> wtw;
  cones.AppendNegWtW(n_ + p_, wtw);
  for (const Triplet& t : wtw) {
    if (t.row() <= t.col()) pattern.emplace_back(t.row(), t.col(), 1.0);
  }
  std::vector<Triplet> full;
  full.reserve(2 * pattern.size());
  for (const Triplet& t : pattern) {
    full.emplace_back(t.row(), t.col(), 1.0);
    if (t.row() != t.col()) full.emplace_back(t.col(), t.row(), 1.0);
  }
  SparseMatrix sym(dim_, dim_);
  sym.setFromTriplets(full.begin(), full.end());
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> perm;
  Eigen::AMDOrdering<int> amd;
  amd(sym, perm);
  old_of_new_.assign(perm.indices().data(),
                     perm.indices().data() + perm.indices().size());
  if (static_cast<int>(old_of_new_.size()) != dim_) {
    old_of_new_.resize(dim_);
    for (int i = 0; i < dim_; ++i) old_of_new_[i] = i;
  }
  new_of_old_.assign(dim_, 0);
  for (int i = 0; i < dim_; ++i) new_of_old_[old_of_new_[i]] = i;
  sign_.assign(dim_, -1.0);
  for (int i = 0; i < n_; ++i) sign_[new_of_old_[i]] = 1.0;
}

bool KktSolver::Factor(const Cones& cones) {
  std::vector<Triplet> trip;
  trip.reserve(fixed_.size() + 4 * m_);
  auto place = [&](int r, int c, double v) {
    const int pr = new_of_old_[r];
    const int pc = new_of_old_[c];
    trip.emplace_back(std::min(pr, pc), std::max(pr, pc), v);
  };
  for (const Triplet& t : fixed_) place(t.row(), t.col(), t.value());
  std::vector<Triplet> wtw;
  cones.AppendNegWtW(n_ + p_, wtw);
  for (const Triplet& t : wtw) {
    if (t.row() <= t.col()) place(t.row(), t.col(), t.value());
  }
  SparseMatrix upper(dim_, dim_);
  upper.setFromTriplets(trip.begin(), trip.end());
  upper.makeCompressed();
  std::vector<int> col_ptr(upper.outerIndexPtr(),
                           upper.outerIndexPtr() + dim_ + 1);
  std::vector<int> row_idx(upper.innerIndexPtr(),
                           upper.innerIndexPtr() + upper.nonZeros());
  std::vector<double> values(upper.valuePtr(),
                             upper.valuePtr() + upper.nonZeros());
  return ldl_.Factor(dim_, col_ptr, row_idx, values, sign_, kDynamicEps,
                     kDynamicDelta);
}

Vector KktSolver::Multiply(const Cones& cones, const Vector& v) const {
  Vector out(dim_);
  const auto x = v.head(n_);
  const auto y = v.segment(n_, p_);
  const auto z = v.tail(m_);
  out.head(n_) = at_ * y + gt_ * z;
  out.segment(n_, p_) = a_ * x;
  out.tail(m_) = g_ * x - cones.ApplyWt(cones.ApplyW(z));
  return out;
}

Vector KktSolver::Solve(const Cones& cones, const Vector& rhs) const {
  auto solve_reg = [&](const Vector& r) {
    Vector perm_r(dim_);
    for (int i = 0; i < dim_; ++i) perm_r(new_of_old_[i]) = r(i);
    ldl_.SolveInPlace(perm_r);
    Vector out(dim_);
    for (int i = 0; i < dim_; ++i) out(i) = perm_r(new_of_old_[i]);
    return out;
  };
  Vector sol = solve_reg(rhs);
  Vector best = sol;
  const double scale = 1.0 + rhs.lpNorm<Eigen::Infinity>();
  double best_err = std::numeric_limits<double>::infinity();
  for (int it = 0; it <= kMaxRefinement; ++it) {
    const Vector resid = rhs - Multiply(cones, sol);
    const double err = resid.lpNorm<Eigen::Infinity>();
    if (!(err < best_err)) break;
    best = sol;
    best_err = err;
    if (err <= 1e-14 * scale) break;
    sol += solve_reg(resid);
  }
  return best;
}

}  // namespace eqscope::conic::internal
