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

#ifndef RPDHG_MODEL_H_
#define RPDHG_MODEL_H_

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rpdhg/cones.h"
#include "rpdhg/linalg.h"

namespace rpdhg {

// Conic LP  min c^T x + objective_offset  s.t.  Ax = b, x in cone.
struct ClpInstance {
  std::string name;
  SparseMatrix a;
  Vec b;
  Vec c;
  ConeSpec cone;
  double objective_offset = 0.0;
  // Set by ProjectCToNullspace: c_original = c + A^T c_multiplier.
  bool c_projected = false;
  Vec c_multiplier;
  double c_projection_residual = 0.0;
  // Optional caches filled by WithCaches before the instance is shared.
  std::optional<SpectralEstimates> spectra;
  std::optional<Vec> q;
  double q_residual = 0.0;

  int m() const { return a.rows(); }
  int n() const { return a.cols(); }
  // Throws InputError on inconsistent dimensions.
  void Validate() const;
};

ClpInstance MakeInstance(std::string name, SparseMatrix a, Vec b, Vec c,
                         ConeSpec cone);
// Returns a copy with spectral estimates and q cached.
ClpInstance WithCaches(ClpInstance inst);

struct PrimalDualPoint {
  Vec x;
  Vec y;
  Vec s;
};

// Builds (x, y, c - A^T y).
PrimalDualPoint MakePoint(const ClpInstance& inst, const Vec& x, const Vec& y);

struct ToleranceTriple {
  double eps_cons = 1e-8;
  double eps_gap = 1e-8;
  double eps_obj = 1e-8;
};

struct QualityReport {
  double dist_v = 0.0;
  double dist_k = 0.0;
  double gap = 0.0;
  std::optional<double> e_obj;
  double relative_error = 0.0;
  bool cons_ok = false;
  bool gap_ok = false;
  bool obj_ok = false;
};

// MPS ingestion. Bounds default to [0, +inf).
struct RawLp {
  std::string name;
  std::string objective_row;
  std::vector<std::string> row_names;
  std::vector<char> row_types;  // 'E', 'L', 'G' or 'N' (free, ignored)
  std::vector<double> rhs;
  std::vector<double> range;  // NaN when no RANGES entry
  std::vector<std::string> col_names;
  std::vector<Triplet> entries;
  std::vector<double> objective;
  double objective_constant = 0.0;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::string> warnings;
};

enum class MpsFormat { kFree, kFixed };

RawLp ParseMps(std::istream& in, MpsFormat format = MpsFormat::kFree);
RawLp ReadMps(const std::string& path, MpsFormat format = MpsFormat::kFree);

// Standard form with the affine back-map x_raw = back_map * x + shift.
struct StandardForm {
  ClpInstance instance;
  SparseMatrix back_map;
  Vec shift;
  std::vector<std::string> raw_col_names;
};

StandardForm ToStandardForm(const RawLp& raw);
Vec MapToRaw(const StandardForm& sf, const Vec& x);

// Instance JSON with schema {name, m, n, A:{rowptr, colind, val}, b, c,
// cone:[{type, dim}]}.
std::string InstanceToJson(const ClpInstance& inst);
ClpInstance InstanceFromJson(const std::string& text);
// Reads ".json" as instance JSON and anything else as MPS in standard form.
ClpInstance LoadInstance(const std::string& path);

// Replaces c by its projection onto Null(A), computed with CG on
// AA^T lambda = Ac. The objective offset absorbs lambda^T b.
ClpInstance ProjectCToNullspace(const ClpInstance& inst,
                                int cg_max_iter = 1000);

// q = A^T (AA^T)^+ b. `residual` receives the CG residual when non-null.
Vec ComputeQ(const ClpInstance& inst, double* residual = nullptr);
// q0 = b^T (AA^T)^+ A c, which equals q^T c.
double ComputeQ0(const ClpInstance& inst, const Vec& q);

// Gap(x, s) = c^T x + q^T s - q0.
double Gap(const ClpInstance& inst, const Vec& x, const Vec& s);
double Gap(const ClpInstance& inst, const PrimalDualPoint& w);
// |c^T x - f*| + |f* - q0 + q^T s|, with f* measured without the offset.
double EObj(const ClpInstance& inst, const Vec& x, const Vec& s,
            double f_star);

double RelativeError(const ClpInstance& inst, const Vec& x, const Vec& y);
// Same quantity from precomputed products: ax = A P(x), aty = A^T y.
double RelativeErrorFromProducts(const ClpInstance& inst, const Vec& x_plus,
                                 const Vec& ax_plus, const Vec& y,
                                 const Vec& aty);

// Euclidean distances of x to {Ax = b} and of s to c + Im(A^T).
double DistToPrimalAffine(const ClpInstance& inst, const Vec& x);
double DistToDualAffine(const ClpInstance& inst, const Vec& s);

std::pair<bool, QualityReport> CheckEpsTolerance(
    const ClpInstance& inst, const PrimalDualPoint& w,
    const ToleranceTriple& eps, std::optional<double> f_star);

// Least-squares y with A^T y close to c - s, via CG on AA^T y = A(c - s).
Vec RecoverY(const ClpInstance& inst, const Vec& s, int cg_max_iter = 1000);

}  // namespace rpdhg

#endif  // RPDHG_MODEL_H_
