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

#include "eqscope/conic/standard_form.h"

#include <cmath>

namespace eqscope::conic {
namespace {

using Triplet = Eigen::Triplet<double, int>;

// Collects affine rows u(x) = a'x + k that must lie in a cone (as s = u(x),
// i.e. G = -a, h = k) or be zero (A = a, b = -k).
class Lowerer {
 public:
  explicit Lowerer(const Program& program, const LoweringOptions& options)
      : program_(program), options_(options),
        next_column_(program.num_scalars()) {}

  StandardForm Run();

 private:
  int NewColumn() { return next_column_++; }

  void Equality(const LinExpr& e) {
    if (!e.IsConstant()) {
      equalities_.push_back(e);
    } else if (e.constant() != 0.0) {
      nonneg_.push_back(LinExpr(-std::abs(e.constant())));
    }
  }
  void NonNeg(const LinExpr& u) {
    if (!u.IsConstant() || u.constant() < 0.0) nonneg_.push_back(u);
  }
  void Soc(LinExpr t, const std::vector<LinExpr>& x);
  void SquaredNorm(const std::vector<LinExpr>& x, const LinExpr& bound);
  void Psd(const PsdConstraint& c);

  const Program& program_;
  LoweringOptions options_;
  int next_column_;
  LinExpr objective_;
  std::vector<LinExpr> equalities_;
  std::vector<LinExpr> nonneg_;
  std::vector<std::vector<LinExpr>> soc_blocks_;
  std::vector<std::vector<LinExpr>> psd_blocks_;
  std::vector<int> psd_orders_;
};

void Lowerer::Soc(LinExpr t, const std::vector<LinExpr>& x) {
  if (static_cast<int>(x.size()) <= options_.soc_split_threshold) {
    std::vector<LinExpr> block;
    block.reserve(x.size() + 1);
    block.push_back(std::move(t));
    block.insert(block.end(), x.begin(), x.end());
    soc_blocks_.push_back(std::move(block));
    return;
  }
  // x_i^2 <= s_i t for every i and sum_i s_i <= t.
  LinExpr slack_sum = t;
  for (const LinExpr& xi : x) {
    const LinExpr si = LinExpr::Term(NewColumn());
    soc_blocks_.push_back({si + t, 2.0 * xi, si - t});
    slack_sum -= si;
  }
  NonNeg(slack_sum);
}

void Lowerer::SquaredNorm(const std::vector<LinExpr>& x,
                          const LinExpr& bound) {
  if (bound.IsConstant()) {
    const double b0 = bound.constant();
    if (b0 < 0.0) {
      NonNeg(LinExpr(b0));
    } else if (b0 == 0.0) {
      for (const LinExpr& xi : x) Equality(xi);
    } else {
      Soc(LinExpr(std::sqrt(b0)), x);
    }
    return;
  }
  // ||x|| <= r and r^2 <= bound.
  const LinExpr r = LinExpr::Term(NewColumn());
  Soc(r, x);
  soc_blocks_.push_back({bound + 1.0, 2.0 * r, bound - 1.0});
}

void Lowerer::Psd(const PsdConstraint& c) {
  const double root2 = std::sqrt(2.0);
  std::vector<LinExpr> block;
  for (int col = 0; col < c.size; ++col) {
    for (int row = col; row < c.size; ++row) {
      const LinExpr& e = c.lower[row * (row + 1) / 2 + col];
      block.push_back(row == col ? e : root2 * e);
    }
  }
  psd_blocks_.push_back(std::move(block));
  psd_orders_.push_back(c.size);
}

StandardForm Lowerer::Run() {
  const Objective& obj = program_.objective();
  objective_ = obj.linear;
  if (!obj.squares.empty()) {
    const LinExpr t = LinExpr::Term(NewColumn());
    objective_ += t;
    SquaredNorm(obj.squares, t);
  }
  for (const LinearConstraint& c : program_.linear()) {
    switch (c.relation) {
      case Relation::kEqual:
        Equality(c.expr);
        break;
      case Relation::kLessEqual:
        NonNeg(-c.expr);
        break;
      case Relation::kGreaterEqual:
        NonNeg(c.expr);
        break;
    }
  }
  for (const SquaredNormConstraint& c : program_.squared_norm()) {
    SquaredNorm(c.x, c.bound);
  }
  for (const SocConstraint& c : program_.soc()) Soc(c.t, c.x);
  for (const PsdConstraint& c : program_.psd()) Psd(c);

  StandardForm out;
  const int n = next_column_;
  out.num_original = program_.num_scalars();
  out.objective_sign = obj.sense == Sense::kMaximize ? -1.0 : 1.0;
  out.c = Eigen::VectorXd::Zero(n);
  for (const auto& [idx, coef] : objective_.terms()) {
    out.c(idx) += out.objective_sign * coef;
  }
  out.c_offset = out.objective_sign * objective_.constant();

  std::vector<Triplet> a_trip;
  out.b.resize(static_cast<Eigen::Index>(equalities_.size()));
  for (size_t r = 0; r < equalities_.size(); ++r) {
    for (const auto& [idx, coef] : equalities_[r].terms()) {
      a_trip.emplace_back(static_cast<int>(r), idx, coef);
    }
    out.b(r) = -equalities_[r].constant();
  }
  out.A.resize(static_cast<int>(equalities_.size()), n);
  out.A.setFromTriplets(a_trip.begin(), a_trip.end());

  std::vector<const LinExpr*> rows;
  for (const LinExpr& u : nonneg_) rows.push_back(&u);
  out.cones.nonneg = static_cast<int>(nonneg_.size());
  for (const auto& block : soc_blocks_) {
    for (const LinExpr& u : block) rows.push_back(&u);
    out.cones.soc.push_back(static_cast<int>(block.size()));
  }
  for (const auto& block : psd_blocks_) {
    for (const LinExpr& u : block) rows.push_back(&u);
  }
  out.cones.psd = psd_orders_;
  std::vector<Triplet> g_trip;
  out.h.resize(static_cast<Eigen::Index>(rows.size()));
  for (size_t r = 0; r < rows.size(); ++r) {
    for (const auto& [idx, coef] : rows[r]->terms()) {
      g_trip.emplace_back(static_cast<int>(r), idx, -coef);
    }
    out.h(r) = rows[r]->constant();
  }
  out.G.resize(static_cast<int>(rows.size()), n);
  out.G.setFromTriplets(g_trip.begin(), g_trip.end());
  return out;
}

}  // namespace

int ConeDims::Size() const {
  int size = nonneg;
  for (int q : soc) size += q;
  for (int p : psd) size += p * (p + 1) / 2;
  return size;
}

int ConeDims::Degree() const {
  int degree = nonneg + static_cast<int>(soc.size());
  for (int p : psd) degree += p;
  return degree;
}

StandardForm Lower(const Program& program, const LoweringOptions& options) {
  return Lowerer(program, options).Run();
}

}  // namespace eqscope::conic
