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

#include "rpdhg/ipm.h"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "json.hpp"
#include "rpdhg/cones.h"
#include "rpdhg/errors.h"

namespace rpdhg {
namespace {

using Json = nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Scaled {
  SparseMatrix a;
  Vec b;
  Vec c;
  DiagonalScaling scaling;
};

Scaled ScaleInstance(const ClpInstance& inst) {
  Scaled s;
  s.scaling = RuizScaling(inst.a, 10);
  s.a = inst.a.Scaled(s.scaling.row_scale, s.scaling.col_scale);
  s.b = s.scaling.row_scale.cwiseProduct(inst.b);
  s.c = s.scaling.col_scale.cwiseProduct(inst.c);
  return s;
}

double StepToBoundary(const Vec& v, const Vec& dv) {
  double step = 1.0;
  for (int i = 0; i < v.size(); ++i) {
    if (dv[i] < 0.0) step = std::min(step, -v[i] / dv[i]);
  }
  return step;
}

class NormalSolver {
 public:
  NormalSolver(const Scaled& p, const Vec& x, const Vec& s, double* ops)
      : p_(p), x_(x), s_(s), ops_(ops) {
    d2_ = x.cwiseQuotient(s);
    precond_ = Vec::Zero(p.a.rows());
    for (int i = 0; i < p.a.rows(); ++i) {
      for (int k = p.a.row_ptr()[i]; k < p.a.row_ptr()[i + 1]; ++k) {
        const double v = p.a.values()[k];
        precond_[i] += v * v * d2_[p.a.col_idx()[k]];
      }
    }
    for (int i = 0; i < precond_.size(); ++i) {
      if (!(precond_[i] > 0.0)) precond_[i] = 1.0;
    }
  }

  struct Direction {
    Vec dx;
    Vec dy;
    Vec ds;
    int cg_iterations = 0;
  };

  // Solves the Newton system for residuals (r_b, r_c, r_xs); the CG stops
  // once the recovered KKT residual is below kkt_tol or after m iterations.
  Direction Solve(const Vec& rb, const Vec& rc, const Vec& rxs,
                  double kkt_tol) {
    const SparseMatrix& a = p_.a;
    const double nnz = static_cast<double>(a.nnz());
    const Vec rhs = -rb - Spmv(a, x_.cwiseProduct(rc).cwiseQuotient(s_)) +
                    Spmv(a, rxs.cwiseQuotient(s_));
    *ops_ += 3.0 * nnz;
    Direction d;
    auto recover = [&](const Vec& dy, Direction& out) {
      out.ds = -rc - SpmvT(a, dy);
      out.dx = -rxs.cwiseQuotient(s_) - d2_.cwiseProduct(out.ds);
      out.dy = dy;
    };
    auto kkt = [&](const Direction& dir) {
      const Vec r1 = Spmv(a, dir.dx) + rb;
      const Vec r2 = SpmvT(a, dir.dy) + dir.ds + rc;
      const Vec r3 = s_.cwiseProduct(dir.dx) + x_.cwiseProduct(dir.ds) + rxs;
      return std::sqrt(r1.squaredNorm() + r2.squaredNorm() + r3.squaredNorm());
    };
    LinearOperator apply = [&](const Vec& in, Vec& out) {
      out = Spmv(a, d2_.cwiseProduct(SpmvT(a, in)));
      *ops_ += 2.0 * nnz;
    };
    CgOptions opts;
    opts.tol = 0.0;
    opts.max_iter = std::max(1, static_cast<int>(a.rows()));
    opts.stop = [&](const Vec& dy, int) {
      Direction trial;
      recover(dy, trial);
      *ops_ += 3.0 * nnz;
      return kkt(trial) <= kkt_tol;
    };
    const CgResult cg = CgSolve(apply, rhs, precond_, opts);
    recover(cg.x, d);
    d.cg_iterations = cg.iterations;
    return d;
  }

 private:
  const Scaled& p_;
  const Vec& x_;
  const Vec& s_;
  double* ops_;
  Vec d2_;
  Vec precond_;
};

void StartingPoint(const Scaled& p, IpmState& st) {
  CgOptions opts;
  opts.max_iter = 1000;
  opts.tol = 1e-12;
  const SparseMatrix& a = p.a;
  const Vec u = SolveNormalEquations(a, p.b, Vec(), opts).x;
  Vec x = SpmvT(a, u);
  const Vec y = SolveNormalEquations(a, Spmv(a, p.c), Vec(), opts).x;
  Vec s = p.c - SpmvT(a, y);
  const double dx = std::max(-1.5 * x.minCoeff(), 0.0);
  const double ds = std::max(-1.5 * s.minCoeff(), 0.0);
  x.array() += dx;
  s.array() += ds;
  double xs = x.dot(s);
  if (!(xs > 0.0)) {
    x.array() += 1.0;
    s.array() += 1.0;
    xs = x.dot(s);
  }
  const double dx2 = 0.5 * xs / s.sum();
  const double ds2 = 0.5 * xs / x.sum();
  x.array() += dx2;
  s.array() += ds2;
  st.x = x;
  st.y = y;
  st.s = s;
  st.initialized = true;
}

IpmIterate Unscale(const ClpInstance& inst, const Scaled& p,
                   const IpmState& st) {
  IpmIterate it;
  it.x = p.scaling.col_scale.cwiseProduct(st.x);
  it.y = p.scaling.row_scale.cwiseProduct(st.y);
  it.s = st.s.cwiseQuotient(p.scaling.col_scale);
  it.mu = it.x.dot(it.s) / inst.n();
  it.relative_error = RelativeError(inst, it.x, it.y);
  it.outer = st.outer;
  it.wall_time_s = st.wall_time_s;
  return it;
}

std::vector<double> ToStd(const Vec& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Vec FromStd(const std::vector<double>& v) {
  return Eigen::Map<const Vec>(v.data(), v.size());
}

}  // namespace

std::string IpmStatusName(IpmStatus status) {
  switch (status) {
    case IpmStatus::kTargetReached: return "target-reached";
    case IpmStatus::kBudgetExhausted: return "budget-exhausted";
    case IpmStatus::kStalled: return "stalled";
    case IpmStatus::kNumerical: return "numerical";
  }
  return "unknown";
}

std::string IpmStateToJson(const IpmState& st) {
  Json j;
  j["schema_version"] = 1;
  j["initialized"] = st.initialized;
  j["x"] = ToStd(st.x);
  j["y"] = ToStd(st.y);
  j["s"] = ToStd(st.s);
  j["mu"] = st.x.size() ? st.x.dot(st.s) / st.x.size() : 0.0;
  j["outer"] = st.outer;
  // JSON has no infinity; null stands for it.
  auto finite_or_null = [](double v) {
    return std::isfinite(v) ? Json(v) : Json(nullptr);
  };
  j["best_mu"] = finite_or_null(st.best_mu);
  j["stall"] = st.stall;
  j["ops"] = st.ops;
  j["ops_budget"] = finite_or_null(st.ops_budget);
  j["wall_time_s"] = st.wall_time_s;
  j["mu_history"] = st.mu_history;
  j["cg_iterations"] = st.cg_iterations;
  return j.dump();
}

IpmState IpmStateFromJson(const std::string& text) {
  IpmState st;
  try {
    const Json j = Json::parse(text);
    if (j.at("schema_version").get<int>() != 1) {
      throw ParseError("unsupported IPM state schema version", 0);
    }
    st.initialized = j.at("initialized").get<bool>();
    st.x = FromStd(j.at("x").get<std::vector<double>>());
    st.y = FromStd(j.at("y").get<std::vector<double>>());
    st.s = FromStd(j.at("s").get<std::vector<double>>());
    st.outer = j.at("outer").get<int>();
    auto number_or_inf = [&j](const char* key) {
      return j.at(key).is_null() ? std::numeric_limits<double>::infinity()
                                 : j.at(key).get<double>();
    };
    st.best_mu = number_or_inf("best_mu");
    st.stall = j.at("stall").get<int>();
    st.ops = j.at("ops").get<double>();
    st.ops_budget = number_or_inf("ops_budget");
    st.wall_time_s = j.at("wall_time_s").get<double>();
    st.mu_history = j.at("mu_history").get<std::vector<double>>();
    st.cg_iterations = j.at("cg_iterations").get<std::vector<int>>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("IPM state: ") + e.what(), 0);
  }
  return st;
}

IpmResult CpCgm(const ClpInstance& inst, const IpmBudget& budget,
                const IpmState* resume) {
  if (!inst.cone.IsOrthant()) {
    throw UnsupportedError("CP-CGM supports the nonnegative orthant only");
  }
  const auto t_start = Clock::now();
  const Scaled p = ScaleInstance(inst);
  const int n = inst.n();
  IpmResult res;
  IpmState& st = res.state;
  if (resume) {
    st = *resume;
    if (st.initialized && (st.x.size() != n || st.y.size() != inst.m())) {
      throw InputError("IPM state does not match the instance");
    }
  }
  const double wall0 = st.wall_time_s;
  if (budget.deterministic) {
    st.ops_budget += budget.time_limit_s * kDeterministicOpsPerSecond;
  }
  auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - t_start).count();
  };
  auto out_of_budget = [&] {
    if (budget.deterministic) return st.ops >= st.ops_budget;
    return elapsed() >= budget.time_limit_s;
  };
  auto finish = [&](IpmStatus status) {
    st.wall_time_s = wall0 + elapsed();
    res.iterate = Unscale(inst, p, st);
    res.status = status;
    return res;
  };

  if (!st.initialized) StartingPoint(p, st);
  {
    const IpmIterate it = Unscale(inst, p, st);
    if (it.relative_error <= budget.target_rel_error) {
      return finish(IpmStatus::kTargetReached);
    }
  }
  const double nnz = static_cast<double>(p.a.nnz());
  while (true) {
    if (st.outer >= budget.max_outer || out_of_budget()) {
      return finish(IpmStatus::kBudgetExhausted);
    }
    const int k = st.outer + 1;
    Vec& x = st.x;
    Vec& y = st.y;
    Vec& s = st.s;
    const double mu = x.dot(s) / n;
    const Vec rb = Spmv(p.a, x) - p.b;
    const Vec rc = SpmvT(p.a, y) + s - p.c;
    st.ops += 2.0 * nnz;
    NormalSolver solver(p, x, s, &st.ops);

    const Vec xs = x.cwiseProduct(s);
    const double qnorm =
        std::sqrt(rb.squaredNorm() + rc.squaredNorm() + xs.squaredNorm());
    const double kkt_tol = 0.1 / std::sqrt(static_cast<double>(k)) * qnorm;
    const auto aff = solver.Solve(rb, rc, xs, kkt_tol);
    const double ap_aff = StepToBoundary(x, aff.dx);
    const double ad_aff = StepToBoundary(s, aff.ds);
    const double mu_aff =
        (x + ap_aff * aff.dx).dot(s + ad_aff * aff.ds) / n;
    const double sigma = std::pow(mu_aff / mu, 3.0);

    const Vec rxs = xs + aff.dx.cwiseProduct(aff.ds) -
                    Vec::Constant(n, sigma * mu);
    const double q2 =
        std::sqrt(rb.squaredNorm() + rc.squaredNorm() + rxs.squaredNorm());
    const auto dir = solver.Solve(rb, rc, rxs, 0.1 / std::sqrt(k) * q2);
    st.cg_iterations.push_back(aff.cg_iterations);
    st.cg_iterations.push_back(dir.cg_iterations);

    const double ap = std::min(1.0, 0.9 * StepToBoundary(x, dir.dx));
    const double ad = std::min(1.0, 0.9 * StepToBoundary(s, dir.ds));
    const Vec xn = x + ap * dir.dx;
    const Vec yn = y + ad * dir.dy;
    const Vec sn = s + ad * dir.ds;
    st.ops += 6.0 * n;
    if (!(xn.minCoeff() > 0.0) || !(sn.minCoeff() > 0.0) ||
        !xn.allFinite() || !yn.allFinite() || !sn.allFinite()) {
      return finish(IpmStatus::kNumerical);
    }
    x = xn;
    y = yn;
    s = sn;
    st.outer = k;
    const double mu_new = x.dot(s) / n;
    st.mu_history.push_back(mu_new);
    if (mu_new < st.best_mu) {
      st.best_mu = mu_new;
      st.stall = 0;
    } else if (++st.stall >= 5) {
      return finish(IpmStatus::kStalled);
    }
    const IpmIterate it = Unscale(inst, p, st);
    st.ops += 2.0 * nnz;
    if (it.relative_error <= budget.target_rel_error) {
      return finish(IpmStatus::kTargetReached);
    }
  }
}

IpmResult InteriorPointAtGap(const ClpInstance& inst, double delta,
                             IpmBudget budget) {
  budget.target_rel_error = delta;
  return CpCgm(inst, budget);
}

}  // namespace rpdhg
