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

#include "rpdhg/rescale.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <utility>

#include "Eigen/Eigenvalues"
#include "json.hpp"
#include "rpdhg/errors.h"

namespace rpdhg {
namespace {

using Json = nlohmann::json;

SparseMatrix RightMultiply(const SparseMatrix& a, const BlockDiagOperator& d) {
  if (d.IsDiagonal()) return d.ScaleColumns(a);
  return SparseMatrix::FromDense(a.ToDense() * d.ToDense());
}

SparseMatrix LeftMultiply(const Rescaling& r, const SparseMatrix& a) {
  switch (r.d2_kind) {
    case D2Kind::kIdentity:
      return a;
    case D2Kind::kDiagonal:
      return a.Scaled(r.d2_diag, Vec::Ones(a.cols()));
    case D2Kind::kDense:
      return SparseMatrix::FromDense(r.d2_dense * a.ToDense());
  }
  return a;
}

CgOptions ProjectionOptions() {
  CgOptions o;
  o.max_iter = 1000;
  o.tol = 1e-12;
  return o;
}

const char* SourceName(RescalingSource s) {
  switch (s) {
    case RescalingSource::kIdentity: return "identity";
    case RescalingSource::kCentralPath: return "central-path";
    case RescalingSource::kEasyColumn: return "easy-column";
    case RescalingSource::kExternal: return "external";
  }
  return "unknown";
}

}  // namespace

Vec Rescaling::ApplyD2(const Vec& v) const {
  switch (d2_kind) {
    case D2Kind::kIdentity: return v;
    case D2Kind::kDiagonal: return d2_diag.cwiseProduct(v);
    case D2Kind::kDense: return d2_dense * v;
  }
  return v;
}

Vec Rescaling::ApplyD2Inverse(const Vec& v) const {
  switch (d2_kind) {
    case D2Kind::kIdentity: return v;
    case D2Kind::kDiagonal: return v.cwiseQuotient(d2_diag);
    case D2Kind::kDense: return d2_dense_inv * v;
  }
  return v;
}

Rescaling IdentityRescaling(const ClpInstance& inst) {
  Rescaling r;
  r.d1 = BlockDiagOperator::Identity(inst.cone);
  return r;
}

Rescaling HessianRescaling(const ClpInstance& inst, const PrimalDualPoint& w,
                           const HessianOptions& options) {
  if (w.x.size() != inst.n()) throw InputError("rescaling point has wrong size");
  if (!IsStrictlyInterior(inst.cone, w.x)) {
    throw InputError("rescaling point is not strictly interior");
  }
  double eta = 0.0;
  if (options.mode == EtaMode::kAhr) {
    eta = w.s.dot(w.x);
  } else {
    const double gap = Gap(inst, w.x, w.s);
    eta = BarrierTheta(inst.cone).theta / gap;
  }
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw InputError("rescaling point has non-positive gap");
  }
  Rescaling r;
  r.d1 = HessianSqrtInvScaled(inst.cone, w.x, eta);
  const bool clip = options.clip.value_or(options.mode == EtaMode::kAhr);
  if (clip) r.d1 = ClipDiagonal(r.d1, options.clip_lo, options.clip_hi);
  r.eta = eta;
  r.source = RescalingSource::kCentralPath;
  return r;
}

Rescaling EasyColumnRescaling(const ClpInstance& inst) {
  Vec colmax = Vec::Zero(inst.n());
  const SparseMatrix& a = inst.a;
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      const int j = a.col_idx()[k];
      colmax[j] = std::max(colmax[j], std::abs(a.values()[k]));
    }
  }
  Rescaling r;
  r.source = RescalingSource::kEasyColumn;
  Vec d = Vec::Ones(inst.n());
  int zero_cols = 0;
  for (int j = 0; j < inst.n(); ++j) {
    if (colmax[j] > 0.0) {
      d[j] = 1.0 / colmax[j];
    } else {
      ++zero_cols;
    }
  }
  // A scaled SOC block must keep a common factor.
  int off = 0;
  for (const ConeBlock& b : inst.cone.blocks()) {
    if (b.type == ConeType::kSecondOrder) {
      const double g = std::exp(d.segment(off, b.dim).array().log().mean());
      d.segment(off, b.dim).setConstant(g);
    }
    off += b.dim;
  }
  if (zero_cols > 0) {
    r.warnings.push_back(std::to_string(zero_cols) +
                         " zero column(s) kept at scale 1");
  }
  BlockDiagOperator d1;
  off = 0;
  for (const ConeBlock& b : inst.cone.blocks()) {
    d1.AddDiagonalBlock(d.segment(off, b.dim));
    off += b.dim;
  }
  r.d1 = std::move(d1);
  return r;
}

Eigen::MatrixXd CompletePreconditioner(const ClpInstance& inst,
                                       const BlockDiagOperator& d1,
                                       int max_rows) {
  if (inst.m() > max_rows) {
    throw UnsupportedError(
        "complete preconditioner needs a dense m x m factorization; m = " +
        std::to_string(inst.m()) + " exceeds the limit " +
        std::to_string(max_rows) + ", use Ruiz/Pock-Chambolle row scaling");
  }
  const Eigen::MatrixXd ad = RightMultiply(inst.a, d1).ToDense();
  const Eigen::MatrixXd g = ad * ad.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
  const Vec& ev = eig.eigenvalues();
  const double cutoff = 1e-12 * std::max(ev.maxCoeff(), 0.0);
  Vec inv_sqrt(ev.size());
  for (int i = 0; i < ev.size(); ++i) {
    inv_sqrt[i] = ev[i] > cutoff ? 1.0 / std::sqrt(ev[i]) : 0.0;
  }
  return eig.eigenvectors() * inv_sqrt.asDiagonal() *
         eig.eigenvectors().transpose();
}

Rescaling WithCompletePreconditioner(const ClpInstance& inst, Rescaling r,
                                     int max_rows) {
  if (inst.m() > max_rows) {
    throw UnsupportedError("complete preconditioner: m exceeds " +
                           std::to_string(max_rows) +
                           ", use Ruiz/Pock-Chambolle row scaling");
  }
  const Eigen::MatrixXd ad = RightMultiply(inst.a, r.d1).ToDense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ad * ad.transpose());
  const Vec& ev = eig.eigenvalues();
  const double cutoff = 1e-12 * std::max(ev.maxCoeff(), 0.0);
  Vec inv_sqrt = Vec::Zero(ev.size());
  Vec sqrt_ev = Vec::Zero(ev.size());
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] > cutoff) {
      sqrt_ev[i] = std::sqrt(ev[i]);
      inv_sqrt[i] = 1.0 / sqrt_ev[i];
    }
  }
  const Eigen::MatrixXd& v = eig.eigenvectors();
  r.d2_kind = D2Kind::kDense;
  r.d2_dense = v * inv_sqrt.asDiagonal() * v.transpose();
  r.d2_dense_inv = v * sqrt_ev.asDiagonal() * v.transpose();
  return r;
}

Rescaling WithRuizPc(const ClpInstance& inst, Rescaling r) {
  if (!r.d1.IsDiagonal()) {
    throw UnsupportedError("Ruiz/Pock-Chambolle composition needs diagonal D1");
  }
  const SparseMatrix scaled = LeftMultiply(r, RightMultiply(inst.a, r.d1));
  const DiagonalScaling sc = RuizPockChambolleScaling(scaled);
  Vec col = sc.col_scale;
  int off = 0;
  for (const ConeBlock& b : inst.cone.blocks()) {
    if (b.type == ConeType::kSecondOrder) {
      const double g = std::exp(col.segment(off, b.dim).array().log().mean());
      col.segment(off, b.dim).setConstant(g);
    }
    off += b.dim;
  }
  const Vec d1 = r.d1.DiagonalEntries().cwiseProduct(col);
  BlockDiagOperator nd1;
  off = 0;
  for (const ConeBlock& b : inst.cone.blocks()) {
    nd1.AddDiagonalBlock(d1.segment(off, b.dim));
    off += b.dim;
  }
  r.d1 = std::move(nd1);
  switch (r.d2_kind) {
    case D2Kind::kIdentity:
      r.d2_kind = D2Kind::kDiagonal;
      r.d2_diag = sc.row_scale;
      break;
    case D2Kind::kDiagonal:
      r.d2_diag = r.d2_diag.cwiseProduct(sc.row_scale);
      break;
    case D2Kind::kDense:
      r.d2_dense = sc.row_scale.asDiagonal() * r.d2_dense;
      r.d2_dense_inv = r.d2_dense_inv * sc.row_scale.cwiseInverse().asDiagonal();
      break;
  }
  return r;
}

RescaledInstance BuildRescaled(const ClpInstance& inst, const Rescaling& r,
                               bool project_c) {
  if (r.d1.dim() != inst.n()) throw InputError("D1 dimension mismatch");
  if (r.d2_kind == D2Kind::kDiagonal && r.d2_diag.size() != inst.m()) {
    throw InputError("D2 dimension mismatch");
  }
  if (r.d2_kind == D2Kind::kDense && r.d2_dense.rows() != inst.m()) {
    throw InputError("D2 dimension mismatch");
  }
  RescaledInstance out;
  out.rescaling = r;
  ClpInstance t;
  t.name = inst.name;
  t.a = LeftMultiply(r, RightMultiply(inst.a, r.d1));
  t.b = r.ApplyD2(inst.b);
  t.c = r.d1.Apply(inst.c);  // D1 is symmetric
  t.cone = inst.cone;
  t.objective_offset = inst.objective_offset;
  t.Validate();
  if (project_c) {
    t = ProjectCToNullspace(t, 1000);
    out.lambda = t.c_multiplier;
  } else {
    out.lambda = Vec::Zero(inst.m());
  }
  out.instance = std::move(t);
  return out;
}

PrimalDualPoint MapBack(const ClpInstance& original,
                        const RescaledInstance& rescaled, const Vec& x_tilde,
                        const Vec& s_tilde, bool pre_project) {
  Vec xt = x_tilde;
  if (pre_project) {
    const ClpInstance& t = rescaled.instance;
    const Vec resid = Spmv(t.a, xt) - t.b;
    const CgResult cg =
        SolveNormalEquations(t.a, resid, Vec(), ProjectionOptions());
    xt -= SpmvT(t.a, cg.x);
  }
  PrimalDualPoint w;
  w.x = rescaled.rescaling.d1.Apply(xt);
  w.s = rescaled.rescaling.d1.ApplyInverse(s_tilde);
  w.y = RecoverY(original, w.s);
  return w;
}

PrimalDualPoint MapBackExact(const ClpInstance& original,
                             const RescaledInstance& rescaled,
                             const Vec& x_tilde, const Vec& y_tilde) {
  PrimalDualPoint w;
  w.x = rescaled.rescaling.d1.Apply(x_tilde);
  w.y = rescaled.rescaling.ApplyD2(y_tilde + rescaled.lambda);
  w.s = original.c - SpmvT(original.a, w.y);
  return w;
}

PdhgPoint MapForward(const RescaledInstance& rescaled, const Vec& x,
                     const Vec& y) {
  PdhgPoint p;
  p.x = rescaled.rescaling.d1.ApplyInverse(x);
  p.y = rescaled.rescaling.ApplyD2Inverse(y) - rescaled.lambda;
  return p;
}

std::pair<Vec, Vec> Phi(const Rescaling& r, const Vec& x, const Vec& s) {
  return {r.d1.ApplyInverse(x), r.d1.Apply(s)};
}

std::pair<Vec, Vec> PhiInverse(const Rescaling& r, const Vec& x_tilde,
                               const Vec& s_tilde) {
  return {r.d1.Apply(x_tilde), r.d1.ApplyInverse(s_tilde)};
}

std::string RescalingToJson(const Rescaling& r) {
  Json j;
  j["source"] = SourceName(r.source);
  j["eta"] = std::isfinite(r.eta) ? Json(r.eta) : Json(nullptr);
  Json blocks = Json::array();
  for (const auto& b : r.d1.blocks()) {
    Json jb;
    jb["offset"] = b.offset;
    jb["dim"] = b.dim;
    if (b.diagonal) {
      jb["diagonal"] = std::vector<double>(b.diag.data(),
                                           b.diag.data() + b.diag.size());
    } else {
      jb["dense_frobenius"] = b.dense.norm();
      jb["dense_trace"] = b.dense.trace();
    }
    blocks.push_back(jb);
  }
  j["d1"] = blocks;
  Json d2;
  switch (r.d2_kind) {
    case D2Kind::kIdentity:
      d2["kind"] = "identity";
      break;
    case D2Kind::kDiagonal:
      d2["kind"] = "diagonal";
      d2["diagonal"] = std::vector<double>(r.d2_diag.data(),
                                           r.d2_diag.data() + r.d2_diag.size());
      break;
    case D2Kind::kDense:
      d2["kind"] = "dense";
      d2["rows"] = r.d2_dense.rows();
      d2["frobenius"] = r.d2_dense.norm();
      d2["trace"] = r.d2_dense.trace();
      break;
  }
  j["d2"] = d2;
  j["warnings"] = r.warnings;
  return j.dump(2);
}

RescaledSolve SolveRescaled(const ClpInstance& original, const Rescaling& r,
                            const SolveOptions& options,
                            std::optional<StepSizes> steps, bool project_c) {
  RescaledSolve out;
  out.rescaled = BuildRescaled(original, r, project_c);
  const RescaledInstance& rs = out.rescaled;
  if (steps) {
    out.steps = *steps;
  } else {
    out.steps =
        PracticalStepSizes(EstimateSpectra(rs.instance.a).lambda_max, 0.8);
  }
  SolveOptions opts = options;
  if (!opts.stop.error) {
    opts.stop.error = [&original, &rs](const Vec& xt, const Vec& yt) {
      const PrimalDualPoint w = MapBackExact(original, rs, xt, yt);
      return RelativeError(original, w.x, w.y);
    };
  }
  SolveResult res = SolveRpdhg(rs.instance, out.steps, opts);
  out.x_tilde = res.x;
  out.y_tilde = res.y;
  const PrimalDualPoint w = MapBackExact(original, rs, res.x, res.y);
  res.x = w.x;
  res.y = w.y;
  res.s = w.s;
  res.relative_error = RelativeError(original, w.x, w.y);
  out.result = std::move(res);
  return out;
}

}  // namespace rpdhg
