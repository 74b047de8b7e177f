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

#include "rpdhg/model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "rpdhg/errors.h"

namespace rpdhg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kJsonSchemaVersion = 1;

CgOptions ProjectionCg(int max_iter = 1000) {
  CgOptions opt;
  opt.tol = 1e-10;
  opt.max_iter = max_iter;
  return opt;
}

}  // namespace

void ClpInstance::Validate() const {
  if (b.size() != a.rows()) throw InputError("b length does not match m");
  if (c.size() != a.cols()) throw InputError("c length does not match n");
  if (cone.dim() != a.cols()) throw InputError("cone dimension is not n");
  if (!b.allFinite() || !c.allFinite()) throw InputError("non-finite b or c");
}

ClpInstance MakeInstance(std::string name, SparseMatrix a, Vec b, Vec c,
                         ConeSpec cone) {
  ClpInstance inst;
  inst.name = std::move(name);
  inst.a = std::move(a);
  inst.b = std::move(b);
  inst.c = std::move(c);
  inst.cone = std::move(cone);
  inst.Validate();
  return inst;
}

ClpInstance WithCaches(ClpInstance inst) {
  if (!inst.spectra && !inst.a.IsZero()) inst.spectra = EstimateSpectra(inst.a);
  if (!inst.q) {
    double res = 0.0;
    Vec q = ComputeQ(inst, &res);
    inst.q = std::move(q);
    inst.q_residual = res;
  }
  return inst;
}

PrimalDualPoint MakePoint(const ClpInstance& inst, const Vec& x,
                          const Vec& y) {
  return {x, y, inst.c - SpmvT(inst.a, y)};
}

StandardForm ToStandardForm(const RawLp& raw) {
  const int n_raw = static_cast<int>(raw.col_names.size());
  const int m_raw = static_cast<int>(raw.row_names.size());
  // Column substitution x_raw = shift + sum_k t_jk x_k.
  std::vector<std::vector<std::pair<int, double>>> subst(n_raw);
  Vec shift = Vec::Zero(n_raw);
  int n = 0;
  std::vector<std::pair<int, double>> upper_rows;  // (column, u - l)
  for (int j = 0; j < n_raw; ++j) {
    const double l = raw.lower[j], u = raw.upper[j];
    if (l > u) {
      throw ModelError("column '" + raw.col_names[j] +
                       "' has lower bound above upper bound");
    }
    if (std::isfinite(l)) {
      shift[j] = l;
      subst[j].push_back({n, 1.0});
      if (std::isfinite(u)) upper_rows.push_back({n, u - l});
      ++n;
    } else if (std::isfinite(u)) {
      shift[j] = u;
      subst[j].push_back({n++, -1.0});
    } else {
      subst[j].push_back({n++, 1.0});
      subst[j].push_back({n++, -1.0});
    }
  }
  // Row activity bounds after substituting the shifts.
  std::vector<std::vector<std::pair<int, double>>> rows(m_raw);
  Vec row_const = Vec::Zero(m_raw);
  for (const Triplet& t : raw.entries) {
    row_const[t.row] += t.value * shift[t.col];
    for (const auto& [k, coef] : subst[t.col]) {
      rows[t.row].push_back({k, t.value * coef});
    }
  }
  std::vector<Triplet> trip;
  std::vector<double> b;
  auto add_row = [&](const std::vector<std::pair<int, double>>& coefs,
                     double rhs) {
    const int r = static_cast<int>(b.size());
    for (const auto& [k, v] : coefs) trip.push_back({r, k, v});
    b.push_back(rhs);
  };
  for (int i = 0; i < m_raw; ++i) {
    const char type = raw.row_types[i];
    if (type == 'N') continue;
    const double rhs = raw.rhs[i];
    const double range = raw.range[i];
    double lo = -kInf, hi = kInf;
    if (type == 'E') {
      lo = hi = rhs;
      if (!std::isnan(range)) {
        if (range > 0) hi = rhs + std::abs(range);
        if (range < 0) lo = rhs - std::abs(range);
      }
    } else if (type == 'L') {
      hi = rhs;
      if (!std::isnan(range)) lo = rhs - std::abs(range);
    } else if (type == 'G') {
      lo = rhs;
      if (!std::isnan(range)) hi = rhs + std::abs(range);
    }
    lo -= row_const[i];
    hi -= row_const[i];
    if (lo > hi) {
      throw ModelError("row '" + raw.row_names[i] + "' has empty range");
    }
    bool empty = true;
    for (const auto& kv : rows[i]) empty = empty && kv.second == 0.0;
    if (empty) {
      if (lo > 1e-9 || hi < -1e-9) {
        throw ModelError("empty row '" + raw.row_names[i] +
                         "' has infeasible constant bounds");
      }
      continue;
    }
    if (lo == hi) {
      add_row(rows[i], lo);
    } else if (std::isfinite(lo) && std::isfinite(hi)) {
      auto coefs = rows[i];
      const int s1 = n++;
      const int s2 = n++;
      coefs.push_back({s1, -1.0});
      add_row(coefs, lo);
      add_row({{s1, 1.0}, {s2, 1.0}}, hi - lo);
    } else if (std::isfinite(hi)) {
      auto coefs = rows[i];
      coefs.push_back({n++, 1.0});
      add_row(coefs, hi);
    } else if (std::isfinite(lo)) {
      auto coefs = rows[i];
      coefs.push_back({n++, -1.0});
      add_row(coefs, lo);
    }
  }
  for (const auto& [k, width] : upper_rows) {
    add_row({{k, 1.0}, {n++, 1.0}}, width);
  }
  Vec c = Vec::Zero(n);
  double offset = raw.objective_constant;
  std::vector<Triplet> back;
  for (int j = 0; j < n_raw; ++j) {
    offset += raw.objective[j] * shift[j];
    for (const auto& [k, coef] : subst[j]) {
      c[k] += raw.objective[j] * coef;
      back.push_back({j, k, coef});
    }
  }
  StandardForm sf;
  const int m = static_cast<int>(b.size());
  sf.instance = MakeInstance(raw.name, SparseMatrix::FromTriplets(m, n, trip),
                             Eigen::Map<Vec>(b.data(), m), c,
                             ConeSpec::NonNeg(n));
  sf.instance.objective_offset = offset;
  sf.back_map = SparseMatrix::FromTriplets(n_raw, n, back);
  sf.shift = shift;
  sf.raw_col_names = raw.col_names;
  return sf;
}

Vec MapToRaw(const StandardForm& sf, const Vec& x) {
  return Spmv(sf.back_map, x) + sf.shift;
}

std::string InstanceToJson(const ClpInstance& inst) {
  nlohmann::json j;
  j["schema_version"] = kJsonSchemaVersion;
  j["name"] = inst.name;
  j["m"] = inst.m();
  j["n"] = inst.n();
  j["A"] = {{"rowptr", inst.a.row_ptr()},
            {"colind", inst.a.col_idx()},
            {"val", inst.a.values()}};
  j["b"] = std::vector<double>(inst.b.data(), inst.b.data() + inst.b.size());
  j["c"] = std::vector<double>(inst.c.data(), inst.c.data() + inst.c.size());
  j["objective_offset"] = inst.objective_offset;
  nlohmann::json cone = nlohmann::json::array();
  for (const ConeBlock& blk : inst.cone.blocks()) {
    cone.push_back({{"type", blk.type == ConeType::kNonNeg ? "nonneg" : "soc"},
                    {"dim", blk.dim}});
  }
  j["cone"] = cone;
  return j.dump(2);
}

ClpInstance InstanceFromJson(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("instance JSON: ") + e.what());
  }
  try {
    const int m = j.at("m").get<int>();
    const int n = j.at("n").get<int>();
    SparseMatrix a(m, n, j.at("A").at("rowptr").get<std::vector<int>>(),
                   j.at("A").at("colind").get<std::vector<int>>(),
                   j.at("A").at("val").get<std::vector<double>>());
    auto bv = j.at("b").get<std::vector<double>>();
    auto cv = j.at("c").get<std::vector<double>>();
    std::vector<ConeBlock> blocks;
    for (const auto& blk : j.at("cone")) {
      const std::string type = blk.at("type").get<std::string>();
      ConeBlock cb;
      if (type == "nonneg" || type == "NonNeg") {
        cb.type = ConeType::kNonNeg;
      } else if (type == "soc" || type == "SecondOrder") {
        cb.type = ConeType::kSecondOrder;
      } else {
        throw ParseError("unknown cone type '" + type + "'");
      }
      cb.dim = blk.at("dim").get<int>();
      blocks.push_back(cb);
    }
    ClpInstance inst = MakeInstance(
        j.value("name", std::string("instance")), std::move(a),
        Eigen::Map<Vec>(bv.data(), static_cast<int>(bv.size())),
        Eigen::Map<Vec>(cv.data(), static_cast<int>(cv.size())),
        ConeSpec(std::move(blocks)));
    inst.objective_offset = j.value("objective_offset", 0.0);
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("instance JSON: ") + e.what());
  }
}

ClpInstance LoadInstance(const std::string& path) {
  const bool is_json =
      path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  if (is_json) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return InstanceFromJson(buf.str());
  }
  ClpInstance inst = ToStandardForm(ReadMps(path)).instance;
  if (inst.name.empty()) inst.name = path;
  return inst;
}

ClpInstance ProjectCToNullspace(const ClpInstance& inst, int cg_max_iter) {
  ClpInstance out = inst;
  const Vec ac = Spmv(inst.a, inst.c);
  const CgResult cg =
      SolveNormalEquations(inst.a, ac, Vec(), ProjectionCg(cg_max_iter));
  out.c = inst.c - SpmvT(inst.a, cg.x);
  out.objective_offset += cg.x.dot(inst.b);
  out.c_multiplier =
      inst.c_multiplier.size() ? Vec(inst.c_multiplier + cg.x) : cg.x;
  out.c_projected = true;
  out.c_projection_residual = cg.residual;
  return out;
}

Vec ComputeQ(const ClpInstance& inst, double* residual) {
  if (inst.q) {
    if (residual) *residual = inst.q_residual;
    return *inst.q;
  }
  const CgResult cg =
      SolveNormalEquations(inst.a, inst.b, Vec(), ProjectionCg());
  if (residual) *residual = cg.residual;
  return SpmvT(inst.a, cg.x);
}

double ComputeQ0(const ClpInstance& inst, const Vec& q) {
  return q.dot(inst.c);
}

double Gap(const ClpInstance& inst, const Vec& x, const Vec& s) {
  const Vec q = ComputeQ(inst);
  return inst.c.dot(x) + q.dot(s) - ComputeQ0(inst, q);
}

double Gap(const ClpInstance& inst, const PrimalDualPoint& w) {
  return Gap(inst, w.x, w.s);
}

double EObj(const ClpInstance& inst, const Vec& x, const Vec& s,
            double f_star) {
  const Vec q = ComputeQ(inst);
  return std::abs(inst.c.dot(x) - f_star) +
         std::abs(f_star - ComputeQ0(inst, q) + q.dot(s));
}

double RelativeErrorFromProducts(const ClpInstance& inst, const Vec& x_plus,
                                 const Vec& ax_plus, const Vec& y,
                                 const Vec& aty) {
  const double primal = (ax_plus - inst.b).norm() / (1.0 + inst.b.norm());
  Vec s = inst.c - aty;
  const Vec sp = Project(Dual(inst.cone), s);
  const double dual = (s - sp).norm() / (1.0 + inst.c.norm());
  const double pobj = inst.c.dot(x_plus);
  const double dobj = inst.b.dot(y);
  const double gap =
      std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
  return std::max({primal, dual, gap});
}

double RelativeError(const ClpInstance& inst, const Vec& x, const Vec& y) {
  const Vec xp = Project(inst.cone, x);
  return RelativeErrorFromProducts(inst, xp, Spmv(inst.a, xp), y,
                                   SpmvT(inst.a, y));
}

double DistToPrimalAffine(const ClpInstance& inst, const Vec& x) {
  const Vec r = Spmv(inst.a, x) - inst.b;
  const CgResult cg = SolveNormalEquations(inst.a, r, Vec(), ProjectionCg());
  return SpmvT(inst.a, cg.x).norm();
}

double DistToDualAffine(const ClpInstance& inst, const Vec& s) {
  const Vec d = s - inst.c;
  const CgResult cg =
      SolveNormalEquations(inst.a, Spmv(inst.a, d), Vec(), ProjectionCg());
  return (d - SpmvT(inst.a, cg.x)).norm();
}

std::pair<bool, QualityReport> CheckEpsTolerance(
    const ClpInstance& inst, const PrimalDualPoint& w,
    const ToleranceTriple& eps, std::optional<double> f_star) {
  QualityReport rep;
  rep.dist_v = std::hypot(DistToPrimalAffine(inst, w.x),
                          DistToDualAffine(inst, w.s));
  rep.dist_k = std::hypot(Distance(inst.cone, w.x),
                          Distance(Dual(inst.cone), w.s));
  rep.gap = Gap(inst, w.x, w.s);
  if (f_star) rep.e_obj = EObj(inst, w.x, w.s, *f_star);
  rep.relative_error = RelativeError(inst, w.x, w.y);
  rep.cons_ok = std::max(rep.dist_v, rep.dist_k) <= eps.eps_cons;
  rep.gap_ok = rep.gap <= eps.eps_gap;
  rep.obj_ok = rep.e_obj.has_value() && *rep.e_obj <= eps.eps_obj;
  const bool ok = rep.cons_ok && rep.gap_ok && (!f_star || rep.obj_ok);
  return {ok, rep};
}

Vec RecoverY(const ClpInstance& inst, const Vec& s, int cg_max_iter) {
  const Vec rhs = Spmv(inst.a, inst.c - s);
  return SolveNormalEquations(inst.a, rhs, Vec(), ProjectionCg(cg_max_iter)).x;
}

}  // namespace rpdhg
