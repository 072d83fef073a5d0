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

#include "eqscope/conic/interior_point.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "cones.h"
#include "kkt.h"

namespace eqscope::conic {
namespace {

using internal::Cones;
using internal::KktSolver;
using Vector = Eigen::VectorXd;

constexpr double kStepFraction = 0.99;

// Ruiz equilibration of [A; G] keeping each cone block uniformly scaled.
struct Equilibration {
  Vector d;   // columns
  Vector ea;  // rows of A
  Vector eg;  // rows of G
};

Equilibration Equilibrate(const StandardForm& p, int passes) {
  const int n = p.num_vars();
  const int rows_a = static_cast<int>(p.A.rows());
  const int rows_g = static_cast<int>(p.G.rows());
  Equilibration e{Vector::Ones(n), Vector::Ones(rows_a), Vector::Ones(rows_g)};
  std::vector<std::pair<int, int>> blocks;
  int offset = p.cones.nonneg;
  for (int q : p.cones.soc) {
    blocks.emplace_back(offset, q);
    offset += q;
  }
  for (int s : p.cones.psd) {
    blocks.emplace_back(offset, s * (s + 1) / 2);
    offset += s * (s + 1) / 2;
  }
  for (int pass = 0; pass < passes; ++pass) {
    Vector col = Vector::Zero(n);
    Vector row_a = Vector::Zero(rows_a);
    Vector row_g = Vector::Zero(rows_g);
    for (int k = 0; k < n; ++k) {
      for (SparseMatrix::InnerIterator it(p.A, k); it; ++it) {
        const double v = std::abs(it.value() * e.ea(it.row()) * e.d(k));
        col(k) = std::max(col(k), v);
        row_a(it.row()) = std::max(row_a(it.row()), v);
      }
      for (SparseMatrix::InnerIterator it(p.G, k); it; ++it) {
        const double v = std::abs(it.value() * e.eg(it.row()) * e.d(k));
        col(k) = std::max(col(k), v);
        row_g(it.row()) = std::max(row_g(it.row()), v);
      }
    }
    for (const auto& [start, len] : blocks) {
      const double m = row_g.segment(start, len).maxCoeff();
      row_g.segment(start, len).setConstant(m);
    }
    auto factor = [](double norm) {
      if (norm <= 0.0) return 1.0;
      return std::clamp(1.0 / std::sqrt(norm), 1e-3, 1e3);
    };
    for (int k = 0; k < n; ++k) e.d(k) *= factor(col(k));
    for (int r = 0; r < rows_a; ++r) e.ea(r) *= factor(row_a(r));
    for (int r = 0; r < rows_g; ++r) e.eg(r) *= factor(row_g(r));
  }
  return e;
}

struct Residuals {
  double pres = 0.0;
  double dres = 0.0;
  double pcost = 0.0;
  double dcost = 0.0;
  double gap = 0.0;
  double relgap = std::numeric_limits<double>::infinity();
  double pinf = std::numeric_limits<double>::infinity();  // certificate
  double dinf = std::numeric_limits<double>::infinity();
  bool pinf_sign = false;
  bool dinf_sign = false;
};

}  // namespace

StandardSolution SolveStandardForm(const StandardForm& prob,
                                   const InteriorPointOptions& options) {
  const int n = prob.num_vars();
  const int p = static_cast<int>(prob.A.rows());
  const int m = static_cast<int>(prob.G.rows());
  StandardSolution out;
  if (p == 0 && m == 0) {
    out.x = Vector::Zero(n);
    out.y = Vector::Zero(0);
    out.z = Vector::Zero(0);
    out.s = Vector::Zero(0);
    if (prob.c.isZero(0.0)) {
      out.status = SolveStatus::kOptimal;
      out.primal_objective = out.dual_objective = prob.c_offset;
    } else {
      out.status = SolveStatus::kUnbounded;
    }
    return out;
  }

  const Equilibration eq = Equilibrate(prob, options.equilibration_passes);
  const SparseMatrix a = eq.ea.asDiagonal() * prob.A * eq.d.asDiagonal();
  const SparseMatrix g = eq.eg.asDiagonal() * prob.G * eq.d.asDiagonal();
  const Vector c = eq.d.cwiseProduct(prob.c);
  const Vector b = eq.ea.cwiseProduct(prob.b);
  const Vector h = eq.eg.cwiseProduct(prob.h);
  const SparseMatrix at = a.transpose();
  const SparseMatrix gt = g.transpose();

  const double norm_b = std::max(1.0, prob.b.norm());
  const double norm_h = std::max(1.0, prob.h.norm());
  const double norm_c = std::max(1.0, prob.c.norm());

  Cones cones(prob.cones);
  const Vector e = cones.Identity();
  cones.UpdateScaling(e, e);
  KktSolver kkt(a, g, cones);

  auto split = [&](const Vector& v, Vector& vx, Vector& vy, Vector& vz) {
    vx = v.head(n);
    vy = v.segment(n, p);
    vz = v.tail(m);
  };
  auto stack = [&](const Vector& vx, const Vector& vy, const Vector& vz) {
    Vector v(n + p + m);
    v << vx, vy, vz;
    return v;
  };

  // Initial point.
  Vector x, y, z, s;
  if (!kkt.Factor(cones)) {
    out.message = "initial factorization failed";
    return out;
  }
  {
    Vector tmp_x, tmp_y, tmp_z;
    split(kkt.Solve(cones, stack(Vector::Zero(n), b, h)), x, tmp_y, tmp_z);
    s = -tmp_z;
    split(kkt.Solve(cones, stack(-c, Vector::Zero(p), Vector::Zero(m))),
          tmp_x, y, z);
    auto shift = [&](Vector& u) {
      const double eig = cones.MinEigenvalue(u);
      if (m > 0 && eig <= 1e-8 * std::max(1.0, u.norm())) {
        u += (1.0 - std::min(eig, 0.0)) * e;
      }
    };
    shift(s);
    shift(z);
  }
  double tau = 1.0;
  double kappa = 1.0;
  const int degree = cones.degree();

  auto residuals = [&](Residuals& r) {
    const Vector xu = eq.d.cwiseProduct(x);
    const Vector yu = eq.ea.cwiseProduct(y);
    const Vector zu = eq.eg.cwiseProduct(z);
    const Vector su = s.cwiseQuotient(eq.eg);
    const Vector ax = prob.A * xu;
    const Vector gx = prob.G * xu;
    const Vector aty_gtz = prob.A.transpose() * yu + prob.G.transpose() * zu;
    const double cx = prob.c.dot(xu);
    const double by_hz = prob.b.dot(yu) + prob.h.dot(zu);
    r.pres = std::max((ax - tau * prob.b).norm() / norm_b,
                      (gx + su - tau * prob.h).norm() / norm_h) /
             tau;
    r.dres = (aty_gtz + tau * prob.c).norm() / norm_c / tau;
    r.pcost = cx / tau;
    r.dcost = -by_hz / tau;
    r.gap = s.dot(z) / (tau * tau);
    if (r.pcost < 0.0) {
      r.relgap = r.gap / -r.pcost;
    } else if (r.dcost > 0.0) {
      r.relgap = r.gap / r.dcost;
    } else {
      r.relgap = std::numeric_limits<double>::infinity();
    }
    r.pinf_sign = by_hz < 0.0;
    r.pinf = r.pinf_sign ? aty_gtz.norm() / -by_hz : r.pinf;
    r.dinf_sign = cx < 0.0;
    r.dinf = r.dinf_sign ? std::max(ax.norm() / norm_b,
                                    (gx + su).norm() / norm_h) /
                               -cx
                         : r.dinf;
  };

  auto finish = [&](SolveStatus status, const std::string& msg, int iter) {
    out.status = status;
    out.iterations = iter;
    out.message = msg;
    const Vector xu = eq.d.cwiseProduct(x);
    const Vector yu = eq.ea.cwiseProduct(y);
    const Vector zu = eq.eg.cwiseProduct(z);
    const Vector su = s.cwiseQuotient(eq.eg);
    if (status == SolveStatus::kOptimal) {
      out.x = xu / tau;
      out.y = yu / tau;
      out.z = zu / tau;
      out.s = su / tau;
      out.primal_objective = prob.c.dot(out.x) + prob.c_offset;
      out.dual_objective =
          -prob.b.dot(out.y) - prob.h.dot(out.z) + prob.c_offset;
    } else if (status == SolveStatus::kInfeasible) {
      const double scale = -(prob.b.dot(yu) + prob.h.dot(zu));
      out.y = yu / scale;
      out.z = zu / scale;
    } else if (status == SolveStatus::kUnbounded) {
      const double scale = -prob.c.dot(xu);
      out.x = xu / scale;
      out.s = su / scale;
    }
    return out;
  };

  auto classify = [&](const Residuals& r, double feastol, double abstol,
                      double reltol, SolveStatus& status) {
    if (r.pres < feastol && r.dres < feastol &&
        (r.gap < abstol || r.relgap < reltol)) {
      status = SolveStatus::kOptimal;
      return true;
    }
    if (kappa > tau && r.pinf_sign && r.pinf < feastol) {
      status = SolveStatus::kInfeasible;
      return true;
    }
    if (kappa > tau && r.dinf_sign && r.dinf < feastol) {
      status = SolveStatus::kUnbounded;
      return true;
    }
    return false;
  };

  Residuals res;
  int stalls = 0;
  int iterations = 0;
  // Best iterate seen, by the worst of the scaled stopping measures.
  struct Snapshot {
    Vector x, y, z, s;
    double tau = 0.0, kappa = 0.0, merit = 0.0;
  } best;
  best.merit = std::numeric_limits<double>::infinity();
  auto merit = [&](const Residuals& r) {
    return std::max({r.pres / options.feastol_reduced,
                     r.dres / options.feastol_reduced,
                     std::min(r.gap / options.abstol_reduced,
                              r.relgap / options.reltol_reduced)});
  };
  for (int iter = 0; iter <= options.max_iterations; ++iter) {
    iterations = iter;
    residuals(res);
    if (options.verbose) {
      std::fprintf(stderr,
                   "%3d pcost %+.6e dcost %+.6e gap %.2e pres %.2e dres "
                   "%.2e k/t %.2e\n",
                   iter, res.pcost, res.dcost, res.gap, res.pres, res.dres,
                   kappa / tau);
    }
    SolveStatus status;
    if (classify(res, options.feastol, options.abstol, options.reltol,
                 status)) {
      return finish(status, "converged", iter);
    }
    if (const double mrt = merit(res); mrt < best.merit) {
      best = {x, y, z, s, tau, kappa, mrt};
    }
    if (iter == options.max_iterations || stalls >= 3) break;

    if (!cones.UpdateScaling(s, z) || !kkt.Factor(cones)) break;
    const Vector& lambda = cones.lambda();
    const Vector rx = at * y + gt * z + tau * c;
    const Vector ry = -(a * x) + tau * b;
    const Vector rz = -(g * x) + tau * h - s;
    const double rt = -c.dot(x) - b.dot(y) - h.dot(z) - kappa;
    const double mu = (s.dot(z) + tau * kappa) / (degree + 1);

    Vector x1, y1, z1;
    split(kkt.Solve(cones, stack(-c, b, h)), x1, y1, z1);
    const double denom_base = -c.dot(x1) - b.dot(y1) - h.dot(z1);

    struct Direction {
      Vector dx, dy, dz, ds;
      double dtau = 0.0;
      double dkappa = 0.0;
    };
    auto direction = [&](const Vector& ds_target, double dk_target,
                         double eta) {
      Direction d;
      const Vector xi = cones.LambdaSolve(ds_target);
      const Vector wt_xi = cones.ApplyWt(xi);
      Vector x2, y2, z2;
      split(kkt.Solve(cones, stack(-eta * rx, eta * ry, eta * rz - wt_xi)),
            x2, y2, z2);
      d.dtau = (-eta * rt + c.dot(x2) + b.dot(y2) + h.dot(z2) +
                dk_target / tau) /
               (kappa / tau + denom_base);
      d.dx = x2 + d.dtau * x1;
      d.dy = y2 + d.dtau * y1;
      d.dz = z2 + d.dtau * z1;
      d.ds = cones.ApplyWt(xi - cones.ApplyW(d.dz));
      d.dkappa = (dk_target - kappa * d.dtau) / tau;
      return d;
    };
    auto max_step = [&](const Direction& d) {
      double alpha = std::min(cones.MaxStep(s, d.ds), cones.MaxStep(z, d.dz));
      if (d.dtau < 0.0) alpha = std::min(alpha, -tau / d.dtau);
      if (d.dkappa < 0.0) alpha = std::min(alpha, -kappa / d.dkappa);
      return alpha;
    };

    const Vector lam_sq = cones.Product(lambda, lambda);
    const Direction aff = direction(-lam_sq, -kappa * tau, 1.0);
    if (!aff.dx.allFinite() || !std::isfinite(aff.dtau)) break;
    const double alpha_aff = std::min(1.0, max_step(aff));
    const double sigma = std::clamp(std::pow(1.0 - alpha_aff, 3), 0.0, 1.0);

    const Vector corr = cones.Product(cones.ApplyWinvT(aff.ds),
                                      cones.ApplyW(aff.dz));
    const Vector ds_target = -lam_sq - corr + sigma * mu * e;
    const double dk_target =
        -kappa * tau - aff.dkappa * aff.dtau + sigma * mu;
    const Direction dir = direction(ds_target, dk_target, 1.0 - sigma);
    if (!dir.dx.allFinite() || !std::isfinite(dir.dtau)) break;
    const double alpha = std::min(1.0, kStepFraction * max_step(dir));
    if (!(alpha > 1e-10)) {
      ++stalls;
    } else {
      stalls = 0;
    }

    x += alpha * dir.dx;
    y += alpha * dir.dy;
    z += alpha * dir.dz;
    s += alpha * dir.ds;
    tau += alpha * dir.dtau;
    kappa += alpha * dir.dkappa;
    if (!(tau > 0.0) || !(kappa > 0.0) || !x.allFinite()) break;
  }

  residuals(res);
  if (best.merit < merit(res) || !std::isfinite(merit(res))) {
    if (std::isfinite(best.merit)) {
      x = best.x;
      y = best.y;
      z = best.z;
      s = best.s;
      tau = best.tau;
      kappa = best.kappa;
      residuals(res);
    }
  }
  SolveStatus status;
  if (classify(res, options.feastol_reduced, options.abstol_reduced,
               options.reltol_reduced, status)) {
    return finish(status, "converged to reduced accuracy", iterations);
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "no convergence: pres %.2e dres %.2e gap %.2e", res.pres,
                res.dres, res.gap);
  return finish(SolveStatus::kNumericalTrouble, buf, iterations);
}

Solution InteriorPointBackend::Solve(const Program& program) const {
  const StandardForm prob = Lower(program, options_.lowering);
  const StandardSolution sol = SolveStandardForm(prob, options_);
  Solution out;
  out.status = sol.status;
  out.iterations = sol.iterations;
  out.message = sol.message;
  if (sol.status == SolveStatus::kOptimal) {
    out.x.assign(sol.x.data(), sol.x.data() + prob.num_original);
    out.objective = prob.objective_sign * sol.primal_objective;
    out.dual_objective = prob.objective_sign * sol.dual_objective;
  }
  return out;
}

}  // namespace eqscope::conic
