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

#ifndef RPDHG_RESCALE_H_
#define RPDHG_RESCALE_H_

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rpdhg/cones.h"
#include "rpdhg/linalg.h"
#include "rpdhg/model.h"
#include "rpdhg/pdhg.h"

namespace rpdhg {

enum class RescalingSource { kIdentity, kCentralPath, kEasyColumn, kExternal };
enum class D2Kind { kIdentity, kDiagonal, kDense };

// Column transform D1 and row transform D2 defining
//   min (D1 c)^T x~  s.t.  D2 A D1 x~ = D2 b,  x~ in K.
struct Rescaling {
  BlockDiagOperator d1;
  D2Kind d2_kind = D2Kind::kIdentity;
  Vec d2_diag;
  Eigen::MatrixXd d2_dense;
  Eigen::MatrixXd d2_dense_inv;
  double eta = std::numeric_limits<double>::quiet_NaN();
  RescalingSource source = RescalingSource::kIdentity;
  std::vector<std::string> warnings;

  Vec ApplyD2(const Vec& v) const;
  Vec ApplyD2Inverse(const Vec& v) const;
};

Rescaling IdentityRescaling(const ClpInstance& inst);

enum class EtaMode {
  kTheory,  // eta = theta_f / Gap(w)
  kAhr,     // eta = s^T x
};

struct HessianOptions {
  EtaMode mode = EtaMode::kTheory;
  // Defaults to clipping in kAhr mode only.
  std::optional<bool> clip;
  double clip_lo = 1e-5;
  double clip_hi = 1e5;
};

// D1 = sqrt(eta) H(x)^{-1/2} at the interior point w. Throws InputError
// unless w.x is strictly interior.
Rescaling HessianRescaling(const ClpInstance& inst, const PrimalDualPoint& w,
                           const HessianOptions& options = {});

// D1 = diag(1 / max_i |a_ij|); zero columns keep scale 1.
Rescaling EasyColumnRescaling(const ClpInstance& inst);

// D2 = (A D1^2 A^T)^{-1/2} (pseudo-inverse square root). Throws
// UnsupportedError when m exceeds `max_rows`.
Eigen::MatrixXd CompletePreconditioner(const ClpInstance& inst,
                                       const BlockDiagOperator& d1,
                                       int max_rows = 2000);
// Sets D2 to the complete preconditioner.
Rescaling WithCompletePreconditioner(const ClpInstance& inst, Rescaling r,
                                     int max_rows = 2000);
// Composes Ruiz (10 passes) and Pock-Chambolle scalings of D2 A D1 into D1
// and a diagonal D2. Requires a diagonal D1.
Rescaling WithRuizPc(const ClpInstance& inst, Rescaling r);

struct RescaledInstance {
  ClpInstance instance;
  Rescaling rescaling;
  // Multiplier removed by the objective projection (zero when not projected).
  Vec lambda;
};

RescaledInstance BuildRescaled(const ClpInstance& inst, const Rescaling& r,
                               bool project_c);

// w = (D1 x~, D1^{-1} s~). With pre_project, x~ is first projected onto
// {x~ : A~ x~ = b~}. y is recovered by least squares on the original.
PrimalDualPoint MapBack(const ClpInstance& original,
                        const RescaledInstance& rescaled, const Vec& x_tilde,
                        const Vec& s_tilde, bool pre_project);

// Exact back-map of a rescaled primal-dual pair: x = D1 x~,
// y = D2 (y~ + lambda).
PrimalDualPoint MapBackExact(const ClpInstance& original,
                             const RescaledInstance& rescaled,
                             const Vec& x_tilde, const Vec& y_tilde);
// Inverse of MapBackExact.
PdhgPoint MapForward(const RescaledInstance& rescaled, const Vec& x,
                     const Vec& y);

// phi(x, s) = (D1^{-1} x, D1 s) and its inverse.
std::pair<Vec, Vec> Phi(const Rescaling& r, const Vec& x, const Vec& s);
std::pair<Vec, Vec> PhiInverse(const Rescaling& r, const Vec& x_tilde,
                               const Vec& s_tilde);

std::string RescalingToJson(const Rescaling& r);

struct RescaledSolve {
  SolveResult result;  // x, y, s on the original instance
  Vec x_tilde;         // final iterate in the rescaled space
  Vec y_tilde;
  RescaledInstance rescaled;
  StepSizes steps;
};

// Solves the rescaled problem by rPDHG with the stop rule evaluated on the
// original instance, and maps the answer back. When `steps` is absent,
// tau = sigma = 0.8 / lambda_max of the rescaled matrix.
RescaledSolve SolveRescaled(const ClpInstance& original, const Rescaling& r,
                            const SolveOptions& options,
                            std::optional<StepSizes> steps = std::nullopt,
                            bool project_c = true);

}  // namespace rpdhg

#endif  // RPDHG_RESCALE_H_
