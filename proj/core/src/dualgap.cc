// Copyright 2026 The rpdhg Authors.
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

#include "rpdhg/dualgap.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include "Eigen/Eigenvalues"
#include "rpdhg/errors.h"

namespace rpdhg {
namespace {

constexpr int kDoublingCap = 60;
constexpr double kBisectionRelTol = 1e-10;

struct Displacement {
  Vec dx;
  Vec dy;
};

// Shared root-finding driver. `solve(t)` returns z(t) - z and `norm` measures
// it; the certificate value is h^T (z(t) - z) / r at the root of
// ||z(t) - z|| = r.
GapCertificate Drive(const std::function<Displacement(double)>& solve,
                     const std::function<double(const Displacement&)>& norm,
                     const Vec& x, const Vec& y, const Vec& h1, const Vec& h2,
                     double r) {
  auto f = [&](double t, Displacement* out) {
    *out = solve(t);
    return norm(*out) - r;
  };
  auto finish = [&](double t, const Displacement& d, bool capped) {
    GapCertificate cert;
    cert.t_star = t;
    cert.x_hat = x + d.dx;
    cert.y_hat = y + d.dy;
    cert.rho = std::max(0.0, (h1.dot(d.dx) + h2.dot(d.dy)) / r);
    cert.capped = capped;
    cert.error_bound = capped ? r / t : 0.0;
    return cert;
  };
  Displacement d;
  double lo = 0.0, hi = 1.0;
  if (f(1.0, &d) >= 0.0) {
    // Root below 1: halve until the ball is not reached.
    hi = 1.0;
    lo = 0.5;
    int k = 0;
    while (f(lo, &d) >= 0.0 && k < 1100) {
      hi = lo;
      lo *= 0.5;
      ++k;
    }
    if (k == 1100) return finish(lo, d, false);
  } else {
    int k = 0;
    lo = 1.0;
    hi = 2.0;
    for (k = 1; k <= kDoublingCap; ++k) {
      hi = std::ldexp(1.0, k);
      if (f(hi, &d) >= 0.0) break;
      lo = hi;
    }
    if (k > kDoublingCap) return finish(hi, d, true);
  }
  for (int it = 0; it < 200 && hi - lo > kBisectionRelTol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid, &d) >= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double t = 0.5 * (lo + hi);
  f(t, &d);
  return finish(t, d, false);
}

void CheckQuery(const ClpInstance& inst, const GapQuery& q) {
  if (!(q.r > 0.0)) throw InputError("normalized gap radius must be > 0");
  if (!(q.tau > 0.0) || !(q.sigma > 0.0)) {
    throw InputError("step sizes must be > 0");
  }
  if (q.x.size() != inst.n() || q.y.size() != inst.m()) {
    throw InputError("normalized gap: dimension mismatch");
  }
}

}  // namespace

GapCertificate RhoNFromResiduals(const ConeSpec& cone, const Vec& x,
                                 const Vec& y, const Vec& h1, const Vec& h2,
                                 double r, double tau, double sigma) {
  if (!(r > 0.0)) throw InputError("normalized gap radius must be > 0");
  auto solve = [&](double t) {
    Displacement d;
    d.dx = Project(cone, x + (0.5 * t * tau) * h1) - x;
    d.dy = (0.5 * t * sigma) * h2;
    return d;
  };
  auto norm = [&](const Displacement& d) {
    return NNorm(d.dx, d.dy, tau, sigma);
  };
  return Drive(solve, norm, x, y, h1, h2, r);
}

GapCertificate RhoN(const ClpInstance& inst, const GapQuery& query) {
  CheckQuery(inst, query);
  const Vec h1 = SpmvT(inst.a, query.y) - inst.c;
  const Vec h2 = inst.b - Spmv(inst.a, query.x);
  return RhoNFromResiduals(inst.cone, query.x, query.y, h1, h2, query.r,
                           query.tau, query.sigma);
}

GapCertificate RhoM(const ClpInstance& inst, const GapQuery& query) {
  CheckQuery(inst, query);
  const double tau = query.tau, sigma = query.sigma;
  const double lmax = inst.spectra ? inst.spectra->lambda_max
                                   : (inst.a.IsZero()
                                          ? 0.0
                                          : EstimateSpectra(inst.a).lambda_max);
  if (tau * sigma * lmax * lmax >= 1.0 - 1e-10) {
    throw UnsupportedError(
        "rho_M requires tau*sigma*lambda_max^2 < 1 (M is singular)");
  }
  const int n = inst.n(), m = inst.m();
  double sigma_max_m;
  if (n + m <= 512) {
    Eigen::MatrixXd mm = Eigen::MatrixXd::Zero(n + m, n + m);
    const Eigen::MatrixXd ad = inst.a.ToDense();
    mm.topLeftCorner(n, n).diagonal().setConstant(1.0 / tau);
    mm.bottomRightCorner(m, m).diagonal().setConstant(1.0 / sigma);
    mm.topRightCorner(n, m) = ad.transpose();
    mm.bottomLeftCorner(m, n) = ad;
    sigma_max_m = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
                      mm, Eigen::EigenvaluesOnly)
                      .eigenvalues()
                      .maxCoeff();
  } else {
    sigma_max_m = std::max(1.0 / tau, 1.0 / sigma) + lmax;
  }
  const double step = 1.0 / (2.0 * sigma_max_m);
  const Vec& x = query.x;
  const Vec& y = query.y;
  const Vec h1 = SpmvT(inst.a, y) - inst.c;
  const Vec h2 = inst.b - Spmv(inst.a, x);
  const double hnorm = std::sqrt(h1.squaredNorm() + h2.squaredNorm());
  Displacement warm{Vec::Zero(n), Vec::Zero(m)};
  double warm_t = 0.0;
  auto solve = [&](double t) {
    Displacement d = warm;
    if (warm_t > 0.0) {
      d.dx *= t / warm_t;
      d.dy *= t / warm_t;
      d.dx = Project(inst.cone, x + d.dx) - x;
    }
    const double scale = std::max(1.0, t * hnorm);
    Vec gx(n), gy(m), adx, atdy;
    for (int it = 0; it < 100000; ++it) {
      // Gradient of t h^T d - d^T M d is t h - 2 M d.
      Spmv(inst.a, d.dx, adx);
      SpmvT(inst.a, d.dy, atdy);
      gx = t * h1 - 2.0 * (d.dx / tau + atdy);
      gy = t * h2 - 2.0 * (d.dy / sigma + adx);
      const Vec nx = Project(inst.cone, x + d.dx + step * gx) - x;
      const Vec ny = d.dy + step * gy;
      const double gmap =
          std::sqrt((nx - d.dx).squaredNorm() + (ny - d.dy).squaredNorm()) /
          step;
      d.dx = nx;
      d.dy = ny;
      if (gmap <= 1e-9 * scale) break;
    }
    warm = d;
    warm_t = t;
    return d;
  };
  auto norm = [&](const Displacement& d) {
    return MNorm(d.dx, d.dy, tau, sigma, inst.a);
  };
  return Drive(solve, norm, x, y, h1, h2, query.r);
}

double RhoForRestart(const ConeSpec& cone, const Vec& x, const Vec& y,
                     const Vec& h1, const Vec& h2, const Vec& anchor_x,
                     const Vec& anchor_y, double tau, double sigma) {
  double r = NNorm(x - anchor_x, y - anchor_y, tau, sigma);
  if (r == 0.0) r = 1e-16 * std::max(1.0, NNorm(x, y, tau, sigma));
  return RhoNFromResiduals(cone, x, y, h1, h2, r, tau, sigma).rho;
}

double RhoForRestart(const ClpInstance& inst, const Vec& x, const Vec& y,
                     const Vec& anchor_x, const Vec& anchor_y, double tau,
                     double sigma) {
  const Vec h1 = SpmvT(inst.a, y) - inst.c;
  const Vec h2 = inst.b - Spmv(inst.a, x);
  return RhoForRestart(inst.cone, x, y, h1, h2, anchor_x, anchor_y, tau,
                       sigma);
}

}  // namespace rpdhg
