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

#include "cones.h"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace eqscope::conic::internal {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int SvecSize(int n) { return n * (n + 1) / 2; }

// u'Ju for a second-order cone block.
double JNorm2(const double* u, int k) {
  double tail = 0.0;
  for (int i = 1; i < k; ++i) tail += u[i] * u[i];
  tail = std::sqrt(tail);
  return (u[0] - tail) * (u[0] + tail);
}

double SocMinEig(const double* u, int k) {
  double tail = 0.0;
  for (int i = 1; i < k; ++i) tail += u[i] * u[i];
  return u[0] - std::sqrt(tail);
}

// Smallest positive root of a t^2 + 2 b t + c with c > 0.
double SocStep(const double* u, const double* du, int k) {
  double a = du[0] * du[0];
  double b = u[0] * du[0];
  for (int i = 1; i < k; ++i) {
    a -= du[i] * du[i];
    b -= u[i] * du[i];
  }
  const double c = JNorm2(u, k);
  if (c <= 0.0) return 0.0;
  double best = kInf;
  if (a == 0.0) {
    if (b < 0.0) best = -c / (2.0 * b);
  } else {
    const double disc = b * b - a * c;
    if (disc >= 0.0) {
      const double root = std::sqrt(disc);
      const double q = -(b + (b >= 0.0 ? root : -root));
      const double r1 = q / a;
      const double r2 = q != 0.0 ? c / q : kInf;
      if (r1 > 0.0) best = std::min(best, r1);
      if (r2 > 0.0) best = std::min(best, r2);
    }
  }
  // Leaving through the apex would need u0 + t du0 < 0 first.
  if (du[0] < 0.0) best = std::min(best, -u[0] / du[0]);
  return best;
}

}  // namespace

Matrix SvecToMat(const double* v, int n) {
  Matrix m(n, n);
  const double inv_root2 = 1.0 / std::sqrt(2.0);
  int k = 0;
  for (int c = 0; c < n; ++c) {
    for (int r = c; r < n; ++r) {
      const double x = r == c ? v[k] : v[k] * inv_root2;
      m(r, c) = x;
      m(c, r) = x;
      ++k;
    }
  }
  return m;
}

void MatToSvec(const Matrix& m, double* v) {
  const int n = static_cast<int>(m.rows());
  const double root2 = std::sqrt(2.0);
  int k = 0;
  for (int c = 0; c < n; ++c) {
    for (int r = c; r < n; ++r) {
      v[k++] = r == c ? m(r, c) : root2 * 0.5 * (m(r, c) + m(c, r));
    }
  }
}

Cones::Cones(const ConeDims& dims) : dims_(dims) {
  size_ = dims.Size();
  degree_ = dims.Degree();
  int offset = dims.nonneg;
  for (int q : dims.soc) {
    soc_start_.push_back(offset);
    offset += q;
  }
  for (int p : dims.psd) {
    psd_start_.push_back(offset);
    offset += SvecSize(p);
  }
  lp_w_ = Vector::Ones(dims.nonneg);
  soc_.resize(dims.soc.size());
  psd_.resize(dims.psd.size());
  lambda_ = Identity();
}

Vector Cones::Identity() const {
  Vector e = Vector::Zero(size_);
  e.head(dims_.nonneg).setOnes();
  for (size_t b = 0; b < dims_.soc.size(); ++b) e(soc_start_[b]) = 1.0;
  for (size_t b = 0; b < dims_.psd.size(); ++b) {
    const int n = dims_.psd[b];
    int k = psd_start_[b];
    for (int c = 0; c < n; ++c) {
      e(k) = 1.0;
      k += n - c;
    }
  }
  return e;
}

double Cones::MinEigenvalue(const Vector& u) const {
  double out = kInf;
  if (dims_.nonneg > 0) out = u.head(dims_.nonneg).minCoeff();
  for (size_t b = 0; b < dims_.soc.size(); ++b) {
    out = std::min(out, SocMinEig(u.data() + soc_start_[b], dims_.soc[b]));
  }
  for (size_t b = 0; b < dims_.psd.size(); ++b) {
    const Matrix m = SvecToMat(u.data() + psd_start_[b], dims_.psd[b]);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
    out = std::min(out, eig.eigenvalues().minCoeff());
  }
  return out;
}

double Cones::MaxStep(const Vector& u, const Vector& du) const {
  double alpha = kInf;
  for (int i = 0; i < dims_.nonneg; ++i) {
    if (du(i) < 0.0) alpha = std::min(alpha, -u(i) / du(i));
  }
  for (size_t b = 0; b < dims_.soc.size(); ++b) {
    const int s = soc_start_[b];
    alpha = std::min(alpha, SocStep(u.data() + s, du.data() + s,
                                    dims_.soc[b]));
  }
  for (size_t b = 0; b < dims_.psd.size(); ++b) {
    const int n = dims_.psd[b];
    const Matrix m = SvecToMat(u.data() + psd_start_[b], n);
    const Matrix dm = SvecToMat(du.data() + psd_start_[b], n);
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) return 0.0;
    const Matrix l = llt.matrixL();
    Matrix x = l.triangularView<Eigen::Lower>().solve(dm);
    x = l.triangularView<Eigen::Lower>().solve(x.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (x + x.transpose()),
                                              Eigen::EigenvaluesOnly);
    const double lmin = eig.eigenvalues().minCoeff();
    if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
  }
  return alpha;
}

bool Cones::UpdateScaling(const Vector& s, const Vector& z) {
  lambda_.resize(size_);
  for (int i = 0; i < dims_.nonneg; ++i) {
    if (!(s(i) > 0.0) || !(z(i) > 0.0)) return false;
    lp_w_(i) = std::sqrt(s(i) / z(i));
    lambda_(i) = std::sqrt(s(i) * z(i));
  }
  for (size_t b = 0; b < dims_.soc.size(); ++b) {
    const int start = soc_start_[b];
    const int k = dims_.soc[b];
    const double* sp = s.data() + start;
    const double* zp = z.data() + start;
    const double sjs = JNorm2(sp, k);
    const double zjz = JNorm2(zp, k);
    if (!(sjs > 0.0) || !(zjz > 0.0) || sp[0] <= 0.0 || zp[0] <= 0.0) {
      return false;
    }
    const double sn = std::sqrt(sjs);
    const double zn = std::sqrt(zjz);
    Eigen::Map<const Vector> sv(sp, k);
    Eigen::Map<const Vector> zv(zp, k);
    const Vector sbar = sv / sn;
    const Vector zbar = zv / zn;
    const double gamma = std::sqrt(0.5 * (1.0 + sbar.dot(zbar)));
    Vector w(k);
    w(0) = (sbar(0) + zbar(0)) / (2.0 * gamma);
    w.tail(k - 1) = (sbar.tail(k - 1) - zbar.tail(k - 1)) / (2.0 * gamma);
    // Re-normalize so that w'Jw = 1 exactly.
    w(0) = std::sqrt(1.0 + w.tail(k - 1).squaredNorm());
    soc_[b].w = w;
    soc_[b].eta = std::sqrt(sn / zn);
  }
  for (size_t b = 0; b < dims_.psd.size(); ++b) {
    const int n = dims_.psd[b];
    const Matrix sm = SvecToMat(s.data() + psd_start_[b], n);
    const Matrix zm = SvecToMat(z.data() + psd_start_[b], n);
    Eigen::LLT<Matrix> ls(sm);
    Eigen::LLT<Matrix> lz(zm);
    if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) {
      return false;
    }
    const Matrix l_s = ls.matrixL();
    const Matrix l_z = lz.matrixL();
    Eigen::JacobiSVD<Matrix> svd(l_z.transpose() * l_s,
                                 Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector sigma = svd.singularValues();
    if (!(sigma.minCoeff() > 0.0)) return false;
    const Matrix v = svd.matrixV();
    PsdScaling& sc = psd_[b];
    sc.sigma = sigma;
    sc.r = l_s * v * sigma.cwiseSqrt().cwiseInverse().asDiagonal();
    sc.r_inv = sigma.cwiseSqrt().asDiagonal() * v.transpose() *
               l_s.triangularView<Eigen::Lower>().solve(
                   Matrix::Identity(n, n));
  }
  lambda_ = ApplyW(z);
  for (size_t b = 0; b < dims_.psd.size(); ++b) {
    // Exactly diagonal by construction; drop round-off.
    MatToSvec(Matrix(psd_[b].sigma.asDiagonal()),
              lambda_.data() + psd_start_[b]);
  }
  return true;
}

Vector Cones::ApplyW(const Vector& v) const {
  Vector out(size_);
  out.head(dims_.nonneg) = lp_w_.cwiseProduct(v.head(dims_.nonneg));
  for (size_t b = 0; b < dims_.soc.size(); ++b) {
    const int start = soc_start_[b];
    const int k = dims_.soc[b];
    const Vector& w = soc_[b].w;
    const double eta = soc_[b].eta;
    const auto v1 = v.segment(start + 1, k - 1);
    const auto w1 = w.tail(k - 1);
    const double dot = w1.dot(v1);
    out(start) = eta * (w(0) * v(start) + dot);
    out.segment(start + 1, k - 1) =
        eta * (v1 + (v(start) + dot / (1.0 + w(0))) * w1);
  }
  for (size_t b = 0; b < dims_.psd.size(); ++b) {
    const int n = dims_.psd[b];
    const Matrix x = SvecToMat(v.data() + psd_start_[b], n);
    MatToSvec(psd_[b].r.transpose() * x * psd_[b].r,
              out.data() + psd_start_[b]);
  }
  return out;
}

Vector Cones::ApplyWt(const Vector& v) const {
  Vector out(size_);
  out.head(dims_.nonneg) = lp_w_.cwiseProduct(v.head(dims_.nonneg));
  Vector soc_part = ApplyW(v);
  for (size_t b = 0; b < dims_.soc.size(); ++b) {
    out.segment(soc_start_[b], dims_.soc[b]) =
        soc_part.segment(soc_start_[b], dims_.soc[b]);
  }
  for (size_t b = 0; b < dims_.psd.size(); ++b) {
    const int n = dims_.psd[b];
    const Matrix x = SvecToMat(v.data() + psd_start_[b], n);
    MatToSvec(psd_[b].r * x * psd_[b].r.transpose(),
              out.data() + psd_start_[b]);
  }
  return out;
}

Vector Cones::ApplyWinvT(const Vector& v) const {
  Vector out(size_);
  out.head(dims_.nonneg) = v.head(dims_.nonneg).cwiseQuotient(lp_w_);
  for (size_t b = 0; b < dims_.soc.size(); ++b) {
    const int start = soc_start_[b];
    const int k = dims_.soc[b];
    const Vector& w = soc_[b].w;
    const double eta = soc_[b].eta;
    const auto v1 = v.segment(start + 1, k - 1);
    const auto w1 = w.tail(k - 1);
    const double dot = w1.dot(v1);
    out(start) = (w(0) * v(start) - dot) / eta;
    out.segment(start + 1, k - 1) =
        (v1 + (-v(start) + dot / (1.0 + w(0))) * w1) / eta;
  }
  for (size_t b = 0; b < dims_.psd.size(); ++b) {
    const int n = dims_.psd[b];
    const Matrix x = SvecToMat(v.data() + psd_start_[b], n);
    MatToSvec(psd_[b].r_inv * x * psd_[b].r_inv.transpose(),
              out.data() + psd_start_[b]);
  }
  return out;
}

void Cones::AppendNegWtW(int offset, std::vector<Triplet>& out) const {
  for (int i = 0; i < dims_.nonneg; ++i) {
    out.emplace_back(offset + i, offset + i, -lp_w_(i) * lp_w_(i));
  }
  for (size_t b = 0; b < dims_.soc.size(); ++b) {
    const int start = offset + soc_start_[b];
    const int k = dims_.soc[b];
    const Vector& w = soc_[b].w;
    const double eta2 = soc_[b].eta * soc_[b].eta;
    for (int c = 0; c < k; ++c) {
      for (int r = 0; r < k; ++r) {
        double v = 2.0 * w(r) * w(c);
        if (r == c) v += (r == 0) ? -1.0 : 1.0;
        out.emplace_back(start + r, start + c, -eta2 * v);
      }
    }
  }
  for (size_t b = 0; b < dims_.psd.size(); ++b) {
    const int n = dims_.psd[b];
    const int k = SvecSize(n);
    const int start = offset + psd_start_[b];
    const Matrix gg = psd_[b].r * psd_[b].r.transpose();
    Vector basis = Vector::Zero(k);
    Vector col(k);
    for (int c = 0; c < k; ++c) {
      basis.setZero();
      basis(c) = 1.0;
      const Matrix x = SvecToMat(basis.data(), n);
      MatToSvec(gg * x * gg, col.data());
      for (int r = 0; r < k; ++r) {
        if (col(r) != 0.0) out.emplace_back(start + r, start + c, -col(r));
      }
    }
  }
}

Vector Cones::Product(const Vector& u, const Vector& v) const {
  Vector out(size_);
  out.head(dims_.nonneg) =
      u.head(dims_.nonneg).cwiseProduct(v.head(dims_.nonneg));
  for (size_t b = 0; b < dims_.soc.size(); ++b) {
    const int start = soc_start_[b];
    const int k = dims_.soc[b];
    const auto uu = u.segment(start, k);
    const auto vv = v.segment(start, k);
    out(start) = uu.dot(vv);
    out.segment(start + 1, k - 1) =
        uu(0) * vv.tail(k - 1) + vv(0) * uu.tail(k - 1);
  }
  for (size_t b = 0; b < dims_.psd.size(); ++b) {
    const int n = dims_.psd[b];
    const Matrix a = SvecToMat(u.data() + psd_start_[b], n);
    const Matrix c = SvecToMat(v.data() + psd_start_[b], n);
    MatToSvec(0.5 * (a * c + c * a), out.data() + psd_start_[b]);
  }
  return out;
}

Vector Cones::LambdaSolve(const Vector& d) const {
  Vector out(size_);
  out.head(dims_.nonneg) =
      d.head(dims_.nonneg).cwiseQuotient(lambda_.head(dims_.nonneg));
  for (size_t b = 0; b < dims_.soc.size(); ++b) {
    const int start = soc_start_[b];
    const int k = dims_.soc[b];
    const auto l = lambda_.segment(start, k);
    const auto dd = d.segment(start, k);
    const double det = JNorm2(lambda_.data() + start, k);
    const double xi0 = (l(0) * dd(0) - l.tail(k - 1).dot(dd.tail(k - 1))) / det;
    out(start) = xi0;
    out.segment(start + 1, k - 1) = (dd.tail(k - 1) - xi0 * l.tail(k - 1)) /
                                    l(0);
  }
  for (size_t b = 0; b < dims_.psd.size(); ++b) {
    const int n = dims_.psd[b];
    const Vector& sigma = psd_[b].sigma;
    Matrix x = SvecToMat(d.data() + psd_start_[b], n);
    for (int c = 0; c < n; ++c) {
      for (int r = 0; r < n; ++r) x(r, c) *= 2.0 / (sigma(r) + sigma(c));
    }
    MatToSvec(x, out.data() + psd_start_[b]);
  }
  return out;
}

}  // namespace eqscope::conic::internal
