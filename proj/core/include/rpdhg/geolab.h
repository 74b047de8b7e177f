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

#ifndef RPDHG_GEOLAB_H_
#define RPDHG_GEOLAB_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "Eigen/Core"
#include "rpdhg/linalg.h"
#include "rpdhg/model.h"

namespace rpdhg {

// Vertices stored as base + offset. Vertices of a sublevel set share an
// exact base with their limit point in the optimal set, which keeps
// O(delta) differences accurate for tiny delta.
struct VertexSet {
  Eigen::MatrixXd base;    // one column per vertex
  Eigen::MatrixXd offset;  // same shape
  std::vector<std::vector<int>> bases;

  int size() const { return static_cast<int>(base.cols()); }
  int dim() const { return static_cast<int>(base.rows()); }
  Vec Vertex(int k) const { return base.col(k) + offset.col(k); }
  Eigen::MatrixXd Points() const { return base + offset; }
};

struct EnumerationLimits {
  int max_cols = 25;
  int max_rows = 15;
  int64_t max_bases = 20000000;
};

// All basic feasible solutions of {x : A x = b, x >= 0}.
VertexSet EnumerateVertices(const Eigen::MatrixXd& a, const Vec& b,
                            const EnumerationLimits& limits = {});

// Vertices of the primal feasible set and of the dual slack set
// {s >= 0 : s in c + Im(A^T)}.
VertexSet PrimalVertices(const ClpInstance& inst,
                         const EnumerationLimits& limits = {});
VertexSet DualSlackVertices(const ClpInstance& inst,
                            const EnumerationLimits& limits = {});

// Parametric vertex enumeration of the sublevel sets
//   W_delta = {(x, s) feasible : Gap(x, s) <= delta}.
// Nonsingular bases are factored once; each delta only filters them.
class SublevelGeometry {
 public:
  explicit SublevelGeometry(const ClpInstance& inst,
                            const EnumerationLimits& limits = {});

  int n() const { return n_; }
  // Vertices of W_delta in R^{2n}.
  VertexSet Vertices(double delta) const;
  // Vertices of the optimal set W* = W_0.
  const VertexSet& OptimalVertices() const { return optimal_; }

 private:
  struct Basis {
    std::vector<int> cols;
    Vec z0;  // solution at delta = 0
    Vec z1;  // derivative in delta
  };

  int n_ = 0;
  std::vector<Basis> bases_;
  VertexSet optimal_;
};

struct PrimalDualGaps {
  double f_star = 0.0;
  double d_star = 0.0;
  double delta_bar = std::numeric_limits<double>::infinity();
  std::vector<double> primal_gaps;
  std::vector<double> dual_gaps;
};

// Smallest positive gap over extreme points of the feasible set, +inf when
// every extreme point is optimal. Throws ModelError on empty feasible sets.
PrimalDualGaps BestSuboptimalGap(const ClpInstance& inst,
                                 const EnumerationLimits& limits = {});
double BestSuboptimalGapValue(const ClpInstance& inst);

struct ConicRadius {
  double r = 0.0;
  Vec center;
};

// max r s.t. w in conv(vertices), w_i >= r. Throws ModelError on an empty
// vertex set.
ConicRadius ConicRadiusFromVertices(const VertexSet& v);
double DiameterFromVertices(const VertexSet& v);
// max over vertices of the distance to conv(optimal).
double HausdorffFromVertices(const VertexSet& v, const VertexSet& optimal);

ConicRadius ComputeConicRadius(const ClpInstance& inst, double delta);
double ComputeDiameter(const ClpInstance& inst, double delta);
double ComputeHausdorff(const ClpInstance& inst, double delta);

struct GeometryPoint {
  double delta = 0.0;
  int vertices = 0;
  double diameter = 0.0;
  double radius = 0.0;
  double hausdorff = 0.0;
  Vec center;
  double ratio() const {
    return radius > 0.0 ? diameter / radius
                        : std::numeric_limits<double>::infinity();
  }
};

GeometryPoint EvaluateAt(const SublevelGeometry& geo, double delta);

struct OptimalSetInfo {
  double dist0 = 0.0;         // Dist(0, W*)
  double max_norm = 0.0;      // max over W* of ||w||
  double width = 0.0;         // Width of R^{2n}_+
  double gamma = 0.0;         // point at which sup r/gamma is estimated
  double sup_r_over_gamma = 0.0;
  bool sandwich_ok = false;
  double sandwich_lower = 0.0;
  double sandwich_upper = 0.0;
};

OptimalSetInfo AnalyzeOptimalSet(const SublevelGeometry& geo, double delta_bar);

double MErr(const ToleranceTriple& eps, const OptimalSetInfo& info);
double MErr(const ClpInstance& inst, const ToleranceTriple& eps);

// 190 kappa (D/r) [ln(33 kappa Dist0) + ln(1/MErr)] + 50 kappa dH / MErr,
// with each logarithm clamped below at 0.
double BoundTclpAt(const GeometryPoint& g, double kappa, double dist0,
                   double merr);

// 40 points per decade from 1e-12 * anchor to 1e2 * anchor.
std::vector<double> DeltaGrid(double anchor, int per_decade = 40,
                              double lo_factor = 1e-12,
                              double hi_factor = 1e2);

struct BoundSummary {
  double t_clp_inf = std::numeric_limits<double>::infinity();
  double t_clp_argmin = 0.0;
  double t_lp = std::numeric_limits<double>::infinity();
  double min_ratio = std::numeric_limits<double>::infinity();
  double min_ratio_delta = 0.0;
};

BoundSummary EvaluateBounds(const std::vector<GeometryPoint>& sweep,
                            double kappa, double dist0, double merr,
                            double delta_bar);
double BoundTclp(const ClpInstance& inst, double delta,
                 const ToleranceTriple& eps);
double BoundTlp(const ClpInstance& inst, const ToleranceTriple& eps);

struct GeometryReport {
  std::string instance;
  double kappa = 1.0;
  double delta_bar = std::numeric_limits<double>::infinity();
  double delta = 0.0;  // evaluation point
  GeometryPoint at_delta;
  OptimalSetInfo optimal;
  ToleranceTriple eps;
  double merr = 0.0;
  double t_delta = 0.0;
  BoundSummary bounds;
  bool ordering_ok = false;  // D >= dH > r > 0
  std::vector<GeometryPoint> sweep;
};

struct AnalyzeOptions {
  ToleranceTriple eps;
  std::optional<double> delta;  // default: delta_bar
  bool sweep = true;
  std::vector<double> sweep_deltas;  // default: DeltaGrid(delta_bar)
  EnumerationLimits limits;
};

// Throws UnsupportedError for non-orthant cones.
GeometryReport Analyze(const ClpInstance& inst,
                       const AnalyzeOptions& options = {});

std::string GeometryReportToJson(const GeometryReport& r);
// Header: delta,D_over_r,dH,D,r,vertices
std::string SweepToCsv(const std::vector<GeometryPoint>& sweep);

// Point on the central path: x_i s_i = 1/eta, by damped Newton. LP only.
PrimalDualPoint CentralPoint(const ClpInstance& inst, double eta,
                             double tol = 1e-13);

struct RescaledGeometryReport {
  double eta = 0.0;
  double alpha = 0.0;
  int theta = 0;
  double diameter = 0.0;
  double radius = 0.0;
  double hausdorff = 0.0;
  double dist0 = 0.0;
  double diameter_bound = 0.0;   // (4 theta + 4 sqrt(2 theta)) / sqrt(eta)
  double radius_bound = 0.0;     // 1 / sqrt(eta)
  double hausdorff_bound = 0.0;  // same as diameter_bound
  double dist0_bound = 0.0;      // (2 theta + 3 sqrt(2 theta)) / sqrt(eta)
  double ratio_bound = 0.0;      // 4 theta + 4 sqrt(2 theta)
  bool diameter_ok = false;
  bool radius_ok = false;
  bool hausdorff_ok = false;
  bool dist0_ok = false;
  bool ratio_ok = false;
  bool all_ok() const {
    return diameter_ok && radius_ok && hausdorff_ok && dist0_ok && ratio_ok;
  }
};

// Rescales by D1 = sqrt(eta) H(x)^{-1/2} at the supplied central point and
// measures the sublevel set at alpha = Gap(w).
RescaledGeometryReport RescaledGeometryCheck(const ClpInstance& inst,
                                             const PrimalDualPoint& central,
                                             double eta);

}  // namespace rpdhg

#endif  // RPDHG_GEOLAB_H_
