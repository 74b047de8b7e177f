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

#include "rpdhg/geolab.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "Eigen/Cholesky"
#include "Eigen/LU"
#include "Eigen/QR"
#include "Eigen/SVD"
#include "json.hpp"
#include "rpdhg/cones.h"
#include "rpdhg/errors.h"
#include "rpdhg/rescale.h"
#include "rpdhg/simplex.h"

namespace rpdhg {
namespace {

using Json = nlohmann::json;
using Eigen::MatrixXd;

double Binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Calls fn on every k-subset of {0..n-1} in lexicographic order.
template <typename Fn>
void ForEachCombination(int n, int k, Fn&& fn) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

void Snap(Vec& v, double rel) {
  const double cut = rel * std::max(1.0, v.cwiseAbs().maxCoeff());
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) <= cut) v[i] = 0.0;
  }
}

// Independent rows of [A b]; throws ModelError when inconsistent.
std::pair<MatrixXd, Vec> IndependentRows(const MatrixXd& a, const Vec& b) {
  if (a.rows() == 0) return {a, b};
  Eigen::ColPivHouseholderQR<MatrixXd> qr(a.transpose());
  qr.setThreshold(1e-10);
  const int rank = qr.rank();
  MatrixXd ar(rank, a.cols());
  Vec br(rank);
  for (int i = 0; i < rank; ++i) {
    const int row = qr.colsPermutation().indices()[i];
    ar.row(i) = a.row(row);
    br[i] = b[row];
  }
  return {ar, br};
}

MatrixXd NullBasis(const MatrixXd& a) {
  const int n = a.cols();
  if (a.rows() == 0) return MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<MatrixXd> svd(a, Eigen::ComputeFullV);
  svd.setThreshold(1e-10);
  const int rank = svd.rank();
  return svd.matrixV().rightCols(n - rank);
}

Vec MinNormSolution(const MatrixXd& a, const Vec& b) {
  Eigen::JacobiSVD<MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-12);
  return svd.solve(b);
}

void RequireOrthant(const ClpInstance& inst) {
  if (!inst.cone.IsOrthant()) {
    throw UnsupportedError("geometry lab supports the nonnegative orthant only");
  }
}

void CheckGuard(int rows, int cols, const EnumerationLimits& limits) {
  if (cols > limits.max_cols || rows > limits.max_rows) {
    throw UnsupportedError("vertex enumeration limited to n <= " +
                           std::to_string(limits.max_cols) + " and m <= " +
                           std::to_string(limits.max_rows));
  }
}

void CheckBases(int cols, int rank, const EnumerationLimits& limits) {
  if (Binomial(cols, rank) > static_cast<double>(limits.max_bases)) {
    throw UnsupportedError("vertex enumeration would visit more than " +
                           std::to_string(limits.max_bases) + " bases");
  }
}

}  // namespace

VertexSet EnumerateVertices(const MatrixXd& a_in, const Vec& b_in,
                            const EnumerationLimits& limits) {
  if (a_in.rows() != b_in.size()) throw InputError("dimension mismatch");
  CheckGuard(a_in.rows(), a_in.cols(), limits);
  const int n = a_in.cols();
  const auto [a, b] = IndependentRows(a_in, b_in);
  const int r = a.rows();
  CheckBases(n, r, limits);
  const double resid_tol = 1e-9 * (1.0 + b_in.cwiseAbs().maxCoeff());

  std::vector<Vec> found;
  std::vector<std::vector<int>> bases;
  ForEachCombination(n, r, [&](const std::vector<int>& cols) {
    MatrixXd bm(r, r);
    for (int j = 0; j < r; ++j) bm.col(j) = a.col(cols[j]);
    Eigen::FullPivLU<MatrixXd> lu(bm);
    lu.setThreshold(1e-10);
    if (lu.rank() < r) return;
    Vec zb = r > 0 ? Vec(lu.solve(b)) : Vec();
    Snap(zb, 1e-12);
    const double tol = 1e-9 * std::max(1.0, zb.size() ? zb.cwiseAbs().maxCoeff() : 0.0);
    if (zb.size() && zb.minCoeff() < -tol) return;
    Vec x = Vec::Zero(n);
    for (int j = 0; j < r; ++j) x[cols[j]] = std::max(zb[j], 0.0);
    if ((a_in * x - b_in).cwiseAbs().maxCoeff() > resid_tol) return;
    for (const Vec& f : found) {
      if ((f - x).cwiseAbs().maxCoeff() <=
          1e-8 * std::max(1.0, x.cwiseAbs().maxCoeff())) {
        return;
      }
    }
    found.push_back(x);
    bases.push_back(cols);
  });
  VertexSet vs;
  vs.base.resize(n, found.size());
  for (size_t k = 0; k < found.size(); ++k) vs.base.col(k) = found[k];
  vs.offset = MatrixXd::Zero(n, found.size());
  vs.bases = std::move(bases);
  return vs;
}

VertexSet PrimalVertices(const ClpInstance& inst,
                         const EnumerationLimits& limits) {
  RequireOrthant(inst);
  return EnumerateVertices(inst.a.ToDense(), inst.b, limits);
}

VertexSet DualSlackVertices(const ClpInstance& inst,
                            const EnumerationLimits& limits) {
  RequireOrthant(inst);
  const MatrixXd z = NullBasis(inst.a.ToDense());
  return EnumerateVertices(z.transpose(), z.transpose() * inst.c, limits);
}

SublevelGeometry::SublevelGeometry(const ClpInstance& inst,
                                   const EnumerationLimits& limits) {
  RequireOrthant(inst);
  CheckGuard(inst.m(), inst.n(), limits);
  n_ = inst.n();
  const MatrixXd a_full = inst.a.ToDense();
  const auto [a, b] = IndependentRows(a_full, inst.b);
  const MatrixXd z = NullBasis(a_full);
  const Vec q = a.rows() ? MinNormSolution(a, b) : Vec(Vec::Zero(n_));
  const double q0 = q.dot(inst.c);
  const int ra = a.rows();
  const int rz = z.cols();
  const int rows = ra + rz + 1;
  const int cols = 2 * n_ + 1;
  CheckBases(cols, rows, limits);

  MatrixXd mat = MatrixXd::Zero(rows, cols);
  mat.block(0, 0, ra, n_) = a;
  mat.block(ra, n_, rz, n_) = z.transpose();
  mat.block(rows - 1, 0, 1, n_) = inst.c.transpose();
  mat.block(rows - 1, n_, 1, n_) = q.transpose();
  mat(rows - 1, cols - 1) = 1.0;
  Vec rhs0(rows);
  rhs0 << b, z.transpose() * inst.c, q0;
  Vec e = Vec::Zero(rows);
  e[rows - 1] = 1.0;

  ForEachCombination(cols, rows, [&](const std::vector<int>& idx) {
    MatrixXd bm(rows, rows);
    for (int j = 0; j < rows; ++j) bm.col(j) = mat.col(idx[j]);
    Eigen::FullPivLU<MatrixXd> lu(bm);
    lu.setThreshold(1e-10);
    if (lu.rank() < rows) return;
    Basis bs;
    bs.cols = idx;
    bs.z0 = lu.solve(rhs0);
    bs.z1 = lu.solve(e);
    Snap(bs.z0, 1e-11);
    Snap(bs.z1, 1e-11);
    const double tol = 1e-9 * std::max(1.0, bs.z0.cwiseAbs().maxCoeff());
    for (int i = 0; i < rows; ++i) {
      if (bs.z1[i] <= 0.0 && bs.z0[i] < -tol) return;
    }
    bases_.push_back(std::move(bs));
  });
  optimal_ = Vertices(0.0);
}

VertexSet SublevelGeometry::Vertices(double delta) const {
  if (!(delta >= 0.0)) throw InputError("delta must be nonnegative");
  const int dim = 2 * n_;
  struct Candidate {
    Vec base;
    Vec offset;
    std::vector<int> cols;
  };
  std::vector<Candidate> cands;
  std::vector<Vec> canon;
  for (const Basis& bs : bases_) {
    bool ok = true;
    for (int i = 0; i < bs.z0.size(); ++i) {
      const double v = bs.z0[i] + delta * bs.z1[i];
      const double tol = 1e-10 * (std::abs(bs.z0[i]) + delta * std::abs(bs.z1[i]));
      if (v < -tol) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    Vec base = Vec::Zero(dim);
    Vec off = Vec::Zero(dim);
    for (size_t j = 0; j < bs.cols.size(); ++j) {
      const int c = bs.cols[j];
      if (c >= dim) continue;
      base[c] = bs.z0[j];
      off[c] = delta * bs.z1[j];
    }
    // Canonical bases: identical limit points share one exact vector.
    const double scale = std::max(1.0, base.cwiseAbs().maxCoeff());
    int id = -1;
    for (size_t k = 0; k < canon.size(); ++k) {
      if ((canon[k] - base).cwiseAbs().maxCoeff() <= 1e-9 * scale) {
        id = static_cast<int>(k);
        break;
      }
    }
    if (id < 0) {
      canon.push_back(base);
    } else {
      base = canon[id];
    }
    for (int i = 0; i < dim; ++i) off[i] = std::max(off[i], -base[i]);
    bool dup = false;
    for (const Candidate& c : cands) {
      const bool same_base = (c.base.array() == base.array()).all();
      const Vec diff = (c.base - base) + (c.offset - off);
      const double tol =
          1e-9 * std::max(c.offset.cwiseAbs().maxCoeff(), off.cwiseAbs().maxCoeff()) +
          (same_base ? 0.0 : 1e-10 * scale);
      if (diff.cwiseAbs().maxCoeff() <= tol) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    cands.push_back({std::move(base), std::move(off), bs.cols});
  }
  VertexSet vs;
  vs.base.resize(dim, cands.size());
  vs.offset.resize(dim, cands.size());
  for (size_t k = 0; k < cands.size(); ++k) {
    vs.base.col(k) = cands[k].base;
    vs.offset.col(k) = cands[k].offset;
    vs.bases.push_back(cands[k].cols);
  }
  return vs;
}

PrimalDualGaps BestSuboptimalGap(const ClpInstance& inst,
                                 const EnumerationLimits& limits) {
  const VertexSet pv = PrimalVertices(inst, limits);
  const VertexSet dv = DualSlackVertices(inst, limits);
  if (pv.size() == 0) throw ModelError("primal feasible set is empty");
  if (dv.size() == 0) throw ModelError("dual feasible set is empty");
  const MatrixXd a = inst.a.ToDense();
  const auto [ar, br] = IndependentRows(a, inst.b);
  const Vec q = ar.rows() ? MinNormSolution(ar, br) : Vec(Vec::Zero(inst.n()));
  const double q0 = q.dot(inst.c);
  PrimalDualGaps g;
  std::vector<double> pobj(pv.size());
  std::vector<double> dobj(dv.size());
  for (int k = 0; k < pv.size(); ++k) pobj[k] = inst.c.dot(pv.Vertex(k));
  for (int k = 0; k < dv.size(); ++k) dobj[k] = q0 - q.dot(dv.Vertex(k));
  g.f_star = *std::min_element(pobj.begin(), pobj.end());
  g.d_star = *std::max_element(dobj.begin(), dobj.end());
  const double tol = 1e-9 * (1.0 + std::abs(g.f_star));
  for (double v : pobj) {
    const double gap = v - g.f_star;
    g.primal_gaps.push_back(gap);
    if (gap > tol) g.delta_bar = std::min(g.delta_bar, gap);
  }
  for (double v : dobj) {
    const double gap = g.d_star - v;
    g.dual_gaps.push_back(gap);
    if (gap > tol) g.delta_bar = std::min(g.delta_bar, gap);
  }
  return g;
}

double BestSuboptimalGapValue(const ClpInstance& inst) {
  return BestSuboptimalGap(inst).delta_bar;
}

ConicRadius ConicRadiusFromVertices(const VertexSet& v) {
  const int k = v.size();
  const int d = v.dim();
  if (k == 0) throw ModelError("sublevel set is empty");
  const MatrixXd pts = v.Points();
  ConicRadius out;
  const Vec m = pts.rowwise().maxCoeff();
  if (m.minCoeff() <= 0.0) {
    out.r = 0.0;
    out.center = pts.rowwise().mean();
    return out;
  }
  const double mmin = m.minCoeff();
  // Variables: lambda (k), rho, u (d). Rows scaled by 1/m_i, r = rho * mmin.
  const int nv = k + 1 + d;
  MatrixXd a = MatrixXd::Zero(d + 1, nv);
  Vec b = Vec::Zero(d + 1);
  for (int i = 0; i < d; ++i) {
    a.block(i, 0, 1, k) = pts.row(i) / m[i];
    a(i, k) = -mmin / m[i];
    a(i, k + 1 + i) = -1.0;
  }
  a.block(d, 0, 1, k).setOnes();
  b[d] = 1.0;
  Vec c = Vec::Zero(nv);
  c[k] = -1.0;
  const DenseLpResult lp = SolveDenseLp(a, b, c);
  if (lp.status != DenseLpStatus::kOptimal) {
    throw NumericalError("conic radius LP did not solve");
  }
  out.r = lp.x[k] * mmin;
  out.center = pts * lp.x.head(k);
  return out;
}

double DiameterFromVertices(const VertexSet& v) {
  double best = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    for (int j = i + 1; j < v.size(); ++j) {
      const Vec d = (v.base.col(i) - v.base.col(j)) +
                    (v.offset.col(i) - v.offset.col(j));
      best = std::max(best, d.norm());
    }
  }
  return best;
}

double HausdorffFromVertices(const VertexSet& v, const VertexSet& optimal) {
  if (optimal.size() == 0) throw ModelError("optimal set is empty");
  const MatrixXd opt = optimal.Points();
  double best = 0.0;
  for (int k = 0; k < v.size(); ++k) {
    const MatrixXd shifted = opt.colwise() - v.base.col(k);
    const NearestPointResult np =
        NearestPointInHull(shifted, v.offset.col(k), 1e-10);
    best = std::max(best, np.distance);
  }
  return best;
}

ConicRadius ComputeConicRadius(const ClpInstance& inst, double delta) {
  return ConicRadiusFromVertices(SublevelGeometry(inst).Vertices(delta));
}

double ComputeDiameter(const ClpInstance& inst, double delta) {
  return DiameterFromVertices(SublevelGeometry(inst).Vertices(delta));
}

double ComputeHausdorff(const ClpInstance& inst, double delta) {
  const SublevelGeometry geo(inst);
  return HausdorffFromVertices(geo.Vertices(delta), geo.OptimalVertices());
}

GeometryPoint EvaluateAt(const SublevelGeometry& geo, double delta) {
  const VertexSet v = geo.Vertices(delta);
  if (v.size() == 0) throw ModelError("sublevel set is empty");
  GeometryPoint g;
  g.delta = delta;
  g.vertices = v.size();
  g.diameter = DiameterFromVertices(v);
  const ConicRadius cr = ConicRadiusFromVertices(v);
  g.radius = cr.r;
  g.center = cr.center;
  g.hausdorff = HausdorffFromVertices(v, geo.OptimalVertices());
  return g;
}

OptimalSetInfo AnalyzeOptimalSet(const SublevelGeometry& geo,
                                 double delta_bar) {
  const VertexSet& opt = geo.OptimalVertices();
  if (opt.size() == 0) throw ModelError("optimal set is empty");
  OptimalSetInfo info;
  const MatrixXd pts = opt.Points();
  info.dist0 = NearestPointInHull(pts, Vec::Zero(pts.rows()), 1e-12).distance;
  info.max_norm = pts.colwise().norm().maxCoeff();
  info.width = Width(ConeSpec::NonNeg(2 * geo.n()));
  const double anchor = std::isfinite(delta_bar) ? delta_bar : 1.0;
  info.gamma = anchor * std::ldexp(1.0, -20);
  const ConicRadius cr = ConicRadiusFromVertices(geo.Vertices(info.gamma));
  info.sup_r_over_gamma = cr.r / info.gamma;
  info.sandwich_lower = info.width / info.max_norm;
  info.sandwich_upper = 1.0 / info.max_norm;
  // r_gamma / gamma approaches the supremum from below as gamma -> 0.
  const double slack = 1e-6;
  info.sandwich_ok =
      info.sup_r_over_gamma >= info.sandwich_lower * (1.0 - slack) &&
      info.sup_r_over_gamma <= info.sandwich_upper * (1.0 + slack);
  return info;
}

double MErr(const ToleranceTriple& eps, const OptimalSetInfo& info) {
  const double gap_term =
      info.dist0 > 0.0 ? std::sqrt(2.0) / (4.0 * info.dist0) * eps.eps_gap
                       : std::numeric_limits<double>::infinity();
  const double obj_term = info.sup_r_over_gamma / 14.0 * eps.eps_obj;
  return std::min({eps.eps_cons, gap_term, obj_term});
}

double MErr(const ClpInstance& inst, const ToleranceTriple& eps) {
  const SublevelGeometry geo(inst);
  return MErr(eps, AnalyzeOptimalSet(geo, BestSuboptimalGapValue(inst)));
}

double BoundTclpAt(const GeometryPoint& g, double kappa, double dist0,
                   double merr) {
  if (!(g.radius > 0.0)) return std::numeric_limits<double>::infinity();
  const double logs = std::max(0.0, std::log(33.0 * kappa * dist0)) +
                      std::max(0.0, std::log(1.0 / merr));
  return 190.0 * kappa * (g.diameter / g.radius) * logs +
         50.0 * kappa * g.hausdorff / merr;
}

std::vector<double> DeltaGrid(double anchor, int per_decade, double lo_factor,
                              double hi_factor) {
  std::vector<double> grid;
  const double lo = std::log10(lo_factor);
  const double hi = std::log10(hi_factor);
  const int steps = static_cast<int>(std::lround((hi - lo) * per_decade));
  for (int i = 0; i <= steps; ++i) {
    grid.push_back(anchor * std::pow(10.0, lo + static_cast<double>(i) / per_decade));
  }
  return grid;
}

BoundSummary EvaluateBounds(const std::vector<GeometryPoint>& sweep,
                            double kappa, double dist0, double merr,
                            double delta_bar) {
  BoundSummary s;
  for (const GeometryPoint& g : sweep) {
    const double t = BoundTclpAt(g, kappa, dist0, merr);
    if (t < s.t_clp_inf) {
      s.t_clp_inf = t;
      s.t_clp_argmin = g.delta;
    }
    if (g.delta <= delta_bar * (1.0 + 1e-12) && g.ratio() < s.min_ratio) {
      s.min_ratio = g.ratio();
      s.min_ratio_delta = g.delta;
    }
  }
  const double logs = std::max(0.0, std::log(33.0 * kappa * dist0)) +
                      std::max(0.0, std::log(1.0 / merr));
  s.t_lp = 255.0 * kappa * s.min_ratio * logs;
  return s;
}

namespace {

double Kappa(const ClpInstance& inst) {
  const Vec sv = PositiveSingularValues(inst.a.ToDense());
  if (sv.size() == 0) throw InputError("constraint matrix is zero");
  return sv[0] / sv[sv.size() - 1];
}

}  // namespace

double BoundTclp(const ClpInstance& inst, double delta,
                 const ToleranceTriple& eps) {
  const SublevelGeometry geo(inst);
  const OptimalSetInfo info =
      AnalyzeOptimalSet(geo, BestSuboptimalGapValue(inst));
  return BoundTclpAt(EvaluateAt(geo, delta), Kappa(inst), info.dist0,
                     MErr(eps, info));
}

double BoundTlp(const ClpInstance& inst, const ToleranceTriple& eps) {
  AnalyzeOptions opts;
  opts.eps = eps;
  return Analyze(inst, opts).bounds.t_lp;
}

GeometryReport Analyze(const ClpInstance& inst, const AnalyzeOptions& options) {
  RequireOrthant(inst);
  GeometryReport r;
  r.instance = inst.name;
  r.eps = options.eps;
  r.kappa = Kappa(inst);
  r.delta_bar = BestSuboptimalGap(inst, options.limits).delta_bar;
  const SublevelGeometry geo(inst, options.limits);
  r.optimal = AnalyzeOptimalSet(geo, r.delta_bar);
  r.merr = MErr(r.eps, r.optimal);
  const double anchor = std::isfinite(r.delta_bar) ? r.delta_bar : 1.0;
  r.delta = options.delta.value_or(anchor);
  r.at_delta = EvaluateAt(geo, r.delta);
  r.t_delta = BoundTclpAt(r.at_delta, r.kappa, r.optimal.dist0, r.merr);
  r.ordering_ok = r.at_delta.diameter >= r.at_delta.hausdorff * (1.0 - 1e-9) &&
                  r.at_delta.hausdorff > r.at_delta.radius &&
                  r.at_delta.radius > 0.0;
  if (options.sweep) {
    const std::vector<double> grid = options.sweep_deltas.empty()
                                         ? DeltaGrid(anchor)
                                         : options.sweep_deltas;
    for (double d : grid) r.sweep.push_back(EvaluateAt(geo, d));
    r.bounds = EvaluateBounds(r.sweep, r.kappa, r.optimal.dist0, r.merr,
                              r.delta_bar);
  } else {
    r.bounds = EvaluateBounds({r.at_delta}, r.kappa, r.optimal.dist0, r.merr,
                              r.delta_bar);
  }
  return r;
}

namespace {

Json FiniteOrNull(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

std::string GeometryReportToJson(const GeometryReport& r) {
  Json j;
  j["schema_version"] = 1;
  j["instance"] = r.instance;
  j["kappa"] = r.kappa;
  j["delta_bar"] = FiniteOrNull(r.delta_bar);
  j["delta"] = r.delta;
  j["D_delta"] = r.at_delta.diameter;
  j["r_delta"] = r.at_delta.radius;
  j["D_over_r"] = FiniteOrNull(r.at_delta.ratio());
  j["dH_delta"] = r.at_delta.hausdorff;
  j["w_delta"] = std::vector<double>(r.at_delta.center.data(),
                                     r.at_delta.center.data() +
                                         r.at_delta.center.size());
  j["vertices"] = r.at_delta.vertices;
  j["max_norm_wstar"] = r.optimal.max_norm;
  j["dist0_wstar"] = r.optimal.dist0;
  j["width"] = r.optimal.width;
  j["sup_r_over_gamma"] = r.optimal.sup_r_over_gamma;
  j["sandwich"] = {{"lower", r.optimal.sandwich_lower},
                   {"upper", r.optimal.sandwich_upper},
                   {"holds", r.optimal.sandwich_ok}};
  j["eps"] = {{"cons", r.eps.eps_cons},
              {"gap", r.eps.eps_gap},
              {"obj", r.eps.eps_obj}};
  j["merr"] = r.merr;
  j["T_delta"] = FiniteOrNull(r.t_delta);
  j["T_clp_inf"] = FiniteOrNull(r.bounds.t_clp_inf);
  j["T_clp_argmin_delta"] = r.bounds.t_clp_argmin;
  j["T_lp"] = FiniteOrNull(r.bounds.t_lp);
  j["ordering_holds"] = r.ordering_ok;
  j["sweep_points"] = r.sweep.size();
  return j.dump(2);
}

std::string SweepToCsv(const std::vector<GeometryPoint>& sweep) {
  std::ostringstream os;
  os.precision(17);
  os << "delta,D_over_r,dH,D,r,vertices\n";
  for (const GeometryPoint& g : sweep) {
    os << g.delta << ',' << g.ratio() << ',' << g.hausdorff << ','
       << g.diameter << ',' << g.radius << ',' << g.vertices << '\n';
  }
  return os.str();
}

PrimalDualPoint CentralPoint(const ClpInstance& inst, double eta, double tol) {
  RequireOrthant(inst);
  if (!(eta > 0.0)) throw InputError("eta must be positive");
  const MatrixXd a = inst.a.ToDense();
  const int n = inst.n();
  const int m = inst.m();
  const double mu_target = 1.0 / eta;
  Vec x = Vec::Ones(n);
  Vec s = Vec::Ones(n);
  Vec y = Vec::Zero(m);
  double mu = std::max(mu_target, 1.0);
  auto residual = [&](double target) {
    const double rp = (a * x - inst.b).norm() / (1.0 + inst.b.norm());
    const double rd =
        (a.transpose() * y + s - inst.c).norm() / (1.0 + inst.c.norm());
    const double rc =
        (x.cwiseProduct(s).array() - target).abs().maxCoeff() / target;
    return std::max({rp, rd, rc});
  };
  double best = std::numeric_limits<double>::infinity();
  PrimalDualPoint best_point;
  for (int it = 0; it < 2000; ++it) {
    const Vec rp = inst.b - a * x;
    const Vec rd = inst.c - a.transpose() * y - s;
    const Vec rc = (Vec::Constant(n, mu) - x.cwiseProduct(s));
    const Vec d = x.cwiseQuotient(s);
    const MatrixXd normal = a * d.asDiagonal() * a.transpose();
    const Vec rhs = rp - a * (rc - x.cwiseProduct(rd)).cwiseQuotient(s);
    const Vec dy = normal.ldlt().solve(rhs);
    const Vec ds = rd - a.transpose() * dy;
    const Vec dx = (rc - x.cwiseProduct(ds)).cwiseQuotient(s);
    double step = 1.0;
    for (int i = 0; i < n; ++i) {
      if (dx[i] < 0.0) step = std::min(step, -0.99 * x[i] / dx[i]);
      if (ds[i] < 0.0) step = std::min(step, -0.99 * s[i] / ds[i]);
    }
    x += step * dx;
    y += step * dy;
    s += step * ds;
    const double res = residual(mu);
    if (mu == mu_target) {
      if (res < best) {
        best = res;
        best_point = {x, y, s};
      } else if (best <= tol * 1e3) {
        break;
      }
      if (best <= tol) break;
    } else if (res < 0.1) {
      mu = std::max(mu_target, 0.3 * mu);
    }
  }
  if (!(best <= 1e-8)) {
    throw NumericalError("central point Newton iteration did not converge");
  }
  return best_point;
}

RescaledGeometryReport RescaledGeometryCheck(const ClpInstance& inst,
                                             const PrimalDualPoint& central,
                                             double eta) {
  RequireOrthant(inst);
  RescaledGeometryReport rep;
  rep.eta = eta;
  rep.theta = BarrierTheta(inst.cone).theta;
  rep.alpha = Gap(inst, central.x, central.s);
  Rescaling rs;
  rs.d1 = HessianSqrtInvScaled(inst.cone, central.x, eta);
  rs.eta = eta;
  rs.source = RescalingSource::kCentralPath;
  const RescaledInstance ri = BuildRescaled(inst, rs, false);
  const SublevelGeometry geo(ri.instance);
  const GeometryPoint g = EvaluateAt(geo, rep.alpha);
  const OptimalSetInfo info = AnalyzeOptimalSet(geo, rep.alpha);
  rep.diameter = g.diameter;
  rep.radius = g.radius;
  rep.hausdorff = g.hausdorff;
  rep.dist0 = info.dist0;
  const double th = rep.theta;
  const double se = std::sqrt(eta);
  rep.ratio_bound = 4.0 * th + 4.0 * std::sqrt(2.0 * th);
  rep.diameter_bound = rep.ratio_bound / se;
  rep.hausdorff_bound = rep.diameter_bound;
  rep.radius_bound = 1.0 / se;
  rep.dist0_bound = (2.0 * th + 3.0 * std::sqrt(2.0 * th)) / se;
  const double slack = 1e-9;
  rep.diameter_ok = rep.diameter <= rep.diameter_bound * (1.0 + slack);
  rep.radius_ok = rep.radius >= rep.radius_bound * (1.0 - slack);
  rep.hausdorff_ok = rep.hausdorff <= rep.hausdorff_bound * (1.0 + slack);
  rep.dist0_ok = rep.dist0 <= rep.dist0_bound * (1.0 + slack);
  rep.ratio_ok = rep.radius > 0.0 &&
                 rep.diameter / rep.radius <= rep.ratio_bound * (1.0 + slack);
  return rep;
}

}  // namespace rpdhg
