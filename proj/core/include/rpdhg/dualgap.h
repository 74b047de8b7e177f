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

#ifndef RPDHG_DUALGAP_H_
#define RPDHG_DUALGAP_H_

#include "rpdhg/linalg.h"
#include "rpdhg/model.h"

namespace rpdhg {

enum class GapNorm { kM, kN };

struct GapQuery {
  Vec x;
  Vec y;
  double r = 1.0;
  double tau = 1.0;
  double sigma = 1.0;
  GapNorm norm = GapNorm::kN;
};

struct GapCertificate {
  double rho = 0.0;
  Vec x_hat;
  Vec y_hat;
  double t_star = 0.0;
  // Upper bound on |rho - true value|; nonzero only when the doubling cap
  // was reached before the ball boundary.
  double error_bound = 0.0;
  bool capped = false;
};

// Normalized duality gap over the N-norm ball, by doubling and bisection on
// the penalty parameter t.
GapCertificate RhoN(const ClpInstance& inst, const GapQuery& query);

// Same with residuals h1 = A^T y - c and h2 = b - Ax already available.
GapCertificate RhoNFromResiduals(const ConeSpec& cone, const Vec& x,
                                 const Vec& y, const Vec& h1, const Vec& h2,
                                 double r, double tau, double sigma);

// Normalized duality gap over the M-norm ball. Desk scale only: each
// penalty subproblem is solved by projected gradient ascent. Throws
// UnsupportedError unless tau * sigma * lambda_max^2 < 1.
GapCertificate RhoM(const ClpInstance& inst, const GapQuery& query);

// rho_N(||candidate - anchor||_N; candidate). A zero radius is replaced by
// 1e-16 * max(1, ||candidate||_N).
double RhoForRestart(const ConeSpec& cone, const Vec& x, const Vec& y,
                     const Vec& h1, const Vec& h2, const Vec& anchor_x,
                     const Vec& anchor_y, double tau, double sigma);
double RhoForRestart(const ClpInstance& inst, const Vec& x, const Vec& y,
                     const Vec& anchor_x, const Vec& anchor_y, double tau,
                     double sigma);

}  // namespace rpdhg

#endif  // RPDHG_DUALGAP_H_
