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

#include "rpdhg/pdhg.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <string>

#include "Eigen/Eigenvalues"
#include "rpdhg/dualgap.h"
#include "rpdhg/errors.h"

namespace rpdhg {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool IsCheckPoint(int64_t k, int every) {
  if (every <= 1) return true;
  if (k % every == 0) return true;
  return k < every && (k & (k - 1)) == 0;
}

const SpectralEstimates& Spectra(const ClpInstance& inst,
                                 SpectralEstimates& storage) {
  if (inst.spectra) return *inst.spectra;
  storage = EstimateSpectra(inst.a);
  return storage;
}

// Primal-dual point together with the products the iteration needs.
struct Tracked {
  Vec x, y, ax, aty;
};

}  // namespace

std::string StatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kIterationLimit: return "iteration-limit";
    case SolveStatus::kTimeLimit: return "time-limit";
  }
  return "unknown";
}

PdhgPoint OnePdhg(const ClpInstance& inst, const Vec& x, const Vec& y,
                  const StepSizes& steps) {
  if (x.size() != inst.n() || y.size() != inst.m()) {
    throw InputError("one_pdhg: dimension mismatch");
  }
  PdhgPoint out;
  out.x = Project(inst.cone, x - steps.tau * (inst.c - SpmvT(inst.a, y)));
  out.y = y + steps.sigma * (inst.b - Spmv(inst.a, 2.0 * out.x - x));
  if (!out.x.allFinite() || !out.y.allFinite()) {
    throw NumericalError("one_pdhg produced non-finite values");
  }
  return out;
}

StepSizes PracticalStepSizes(double lambda_max, double factor) {
  if (!(lambda_max > 0.0)) throw InputError("lambda_max must be > 0");
  return {factor / lambda_max, factor / lambda_max, StepProvenance::kPractical};
}

StepSizes DefaultStepSizes(const ClpInstance& inst) {
  SpectralEstimates storage;
  const SpectralEstimates& sp = Spectra(inst, storage);
  if (!sp.lambda_min) return PracticalStepSizes(sp.lambda_max);
  return {1.0 / *sp.kappa, 1.0 / (sp.lambda_max * *sp.lambda_min),
          StepProvenance::kTheorem};
}

std::vector<StepSizes> LearnedStepPairs(double lambda_max) {
  if (!(lambda_max > 0.0)) throw InputError("lambda_max must be > 0");
  std::vector<StepSizes> pairs;
  for (int l = -2; l <= 2; ++l) {
    const double f = std::pow(10.0, l);
    pairs.push_back({f / (2.0 * lambda_max), 1.0 / (f * 2.0 * lambda_max),
                     StepProvenance::kLearned});
  }
  return pairs;
}

SolveResult SolveRpdhg(const ClpInstance& inst, const StepSizes& steps,
                       const SolveOptions& options) {
  const auto start = Clock::now();
  const int n = inst.n(), m = inst.m();
  const double tau = steps.tau, sigma = steps.sigma;
  if (!(tau > 0.0) || !(sigma > 0.0)) throw InputError("step sizes must be > 0");
  const RestartOptions& ro = options.restart;
  const StopRule& stop = options.stop;

  Tracked cur;
  cur.x = options.x0.size() ? options.x0 : Vec::Zero(n);
  cur.y = options.y0.size() ? options.y0 : Vec::Zero(m);
  if (cur.x.size() != n || cur.y.size() != m) {
    throw InputError("solve_rpdhg: starting point dimension mismatch");
  }
  if (Distance(inst.cone, cur.x) > 1e-10 * (1.0 + cur.x.norm())) {
    throw InputError("solve_rpdhg: starting x must lie in the cone");
  }
  Spmv(inst.a, cur.x, cur.ax);
  SpmvT(inst.a, cur.y, cur.aty);
  const double z0_norm = std::sqrt(cur.x.squaredNorm() + cur.y.squaredNorm());
  const double blowup = 1e12 * (1.0 + z0_norm);

  auto error_of = [&](const Tracked& p) {
    if (stop.error) return stop.error(p.x, p.y);
    return RelativeErrorFromProducts(inst, p.x, p.ax, p.y, p.aty);
  };
  auto rho_of = [&](const Tracked& p, const Tracked& anchor) {
    const Vec h1 = p.aty - inst.c;
    const Vec h2 = inst.b - p.ax;
    return RhoForRestart(inst.cone, p.x, p.y, h1, h2, anchor.x, anchor.y, tau,
                         sigma);
  };

  SolveResult res;
  Tracked anchor = cur;
  Tracked avg{Vec::Zero(n), Vec::Zero(m), Vec::Zero(m), Vec::Zero(n)};
  Tracked best = cur;
  double best_err = std::numeric_limits<double>::infinity();
  double rho_prev = std::numeric_limits<double>::infinity();
  int outer = 0;
  int64_t k = 0;
  Vec x_next(n), ax_next(m), y_next(m), aty_next(n);

  auto finish = [&](const Tracked& p, double err, SolveStatus status) {
    res.x = p.x;
    res.y = p.y;
    res.s = inst.c - p.aty;
    res.status = status;
    res.error = err;
    res.relative_error =
        RelativeErrorFromProducts(inst, p.x, p.ax, p.y, p.aty);
    res.matvecs = 2 * res.iterations + 2;
    res.wall_time_s = Seconds(start);
    return res;
  };

  if (!stop.anchors_only) {
    // A start that already meets the target is still run for one step so
    // that the first outer loop completes.
    best_err = error_of(cur);
  }

  while (true) {
    if (res.iterations >= stop.max_iters) {
      return finish(best, best_err, SolveStatus::kIterationLimit);
    }
    // PDHG step.
    x_next = cur.x - tau * (inst.c - cur.aty);
    ProjectInPlace(inst.cone, x_next);
    Spmv(inst.a, x_next, ax_next);
    y_next = cur.y + sigma * (inst.b - (2.0 * ax_next - cur.ax));
    SpmvT(inst.a, y_next, aty_next);
    ++res.iterations;
    if (!x_next.allFinite() || !y_next.allFinite()) {
      throw NumericalError("non-finite iterate at iteration " +
                           std::to_string(res.iterations));
    }
    if (options.on_step) options.on_step(cur.x, cur.y, x_next, y_next);
    std::swap(cur.x, x_next);
    std::swap(cur.y, y_next);
    std::swap(cur.ax, ax_next);
    std::swap(cur.aty, aty_next);
    if (std::sqrt(cur.x.squaredNorm() + cur.y.squaredNorm()) > blowup) {
      throw NumericalError("iterates diverged at iteration " +
                           std::to_string(res.iterations));
    }
    ++k;
    const double w = 1.0 / static_cast<double>(k);
    avg.x += w * (cur.x - avg.x);
    avg.y += w * (cur.y - avg.y);
    avg.ax += w * (cur.ax - avg.ax);
    avg.aty += w * (cur.aty - avg.aty);

    if (!IsCheckPoint(k, ro.check_every) && !(outer == 0 && k == 1)) {
      continue;
    }
    const double rho_avg = rho_of(avg, anchor);
    double rho_cand = rho_avg;
    const Tracked* cand = &avg;
    if (ro.flexible) {
      const double rho_cur = rho_of(cur, anchor);
      if (rho_cur < rho_avg) {
        rho_cand = rho_cur;
        cand = &cur;
      }
    }
    const bool restart = (outer == 0 && k == 1) || rho_cand <= ro.beta * rho_prev;
    const double now = Seconds(start);

    if (!stop.anchors_only) {
      const double e_cur = error_of(cur);
      const double e_avg = error_of(avg);
      if (e_cur < best_err) {
        best_err = e_cur;
        best = cur;
      }
      if (e_avg < best_err) {
        best_err = e_avg;
        best = avg;
      }
    }
    if (restart) {
      anchor = *cand;
      cur = anchor;
      rho_prev = rho_cand;
      res.restart_rhos.push_back(rho_cand);
      ++outer;
      ++res.restarts;
      k = 0;
      avg.x.setZero();
      avg.y.setZero();
      avg.ax.setZero();
      avg.aty.setZero();
      if (stop.anchors_only) {
        best_err = error_of(anchor);
        best = anchor;
      }
    }
    if (options.record_trace) {
      TraceRow row;
      row.iter = res.iterations;
      row.outer = outer;
      row.e_r = RelativeErrorFromProducts(inst, cur.x, cur.ax, cur.y, cur.aty);
      row.rho = rho_cand;
      row.restarted = restart;
      row.wall_time_s = now;
      res.trace.push_back(row);
    }
    if (best_err <= stop.eps) {
      return finish(best, best_err, SolveStatus::kOptimal);
    }
    if (now > stop.time_limit_s) {
      return finish(best, best_err, SolveStatus::kTimeLimit);
    }
  }
}

std::string TraceToCsv(const std::vector<TraceRow>& trace) {
  std::ostringstream out;
  out.precision(17);
  out << "iter,outer,E_r,rho,restarted_flag,wall_time_s\n";
  for (const TraceRow& r : trace) {
    out << r.iter << ',' << r.outer << ',' << r.e_r << ',' << r.rho << ','
        << (r.restarted ? 1 : 0) << ',' << r.wall_time_s << '\n';
  }
  return out.str();
}

LearnedSelection SelectLearnedSteps(const ClpInstance& inst,
                                    double lambda_max,
                                    const SolveOptions& base, int64_t iters) {
  LearnedSelection sel;
  double best = std::numeric_limits<double>::infinity();
  const std::vector<StepSizes> pairs = LearnedStepPairs(lambda_max);
  for (size_t i = 0; i < pairs.size(); ++i) {
    const StepSizes& pair = pairs[i];
    SolveOptions opt = base;
    opt.stop.max_iters = iters;
    opt.record_trace = false;
    double err = std::numeric_limits<double>::infinity();
    try {
      const SolveResult r = SolveRpdhg(inst, pair, opt);
      err = r.error;
      sel.iterations += r.iterations;
    } catch (const NumericalError&) {
      sel.iterations += iters;
    }
    sel.errors.push_back(err);
    if (err < best) {
      best = err;
      sel.chosen = pair;
      sel.chosen_index = static_cast<int>(i);
    }
  }
  if (!std::isfinite(best)) sel.chosen = pairs[2];
  return sel;
}

double DistMToHull(const ClpInstance& inst, const StepSizes& steps,
                   const Vec& z, const Eigen::MatrixXd& saddle_points) {
  const int n = inst.n(), m = inst.m();
  Eigen::MatrixXd mm = Eigen::MatrixXd::Zero(n + m, n + m);
  const Eigen::MatrixXd ad = inst.a.ToDense();
  mm.topLeftCorner(n, n).diagonal().setConstant(1.0 / steps.tau);
  mm.bottomRightCorner(m, m).diagonal().setConstant(1.0 / steps.sigma);
  mm.topRightCorner(n, m) = ad.transpose();
  mm.bottomLeftCorner(m, n) = ad;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mm);
  const Vec root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd half =
      eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
  return NearestPointInHull(half * saddle_points, half * z).distance;
}

SublinearReport SublinearCheck(const ClpInstance& inst, const StepSizes& steps,
                               const Vec& x0, const Vec& y0,
                               const Eigen::MatrixXd& saddle_points,
                               int iters) {
  const int n = inst.n(), m = inst.m();
  SublinearReport rep;
  Vec z0(n + m);
  z0 << x0, y0;
  rep.dist_m = DistMToHull(inst, steps, z0, saddle_points);
  Vec x = x0, y = y0, xbar = Vec::Zero(n), ybar = Vec::Zero(m);
  for (int k = 1; k <= iters; ++k) {
    const PdhgPoint next = OnePdhg(inst, x, y, steps);
    x = next.x;
    y = next.y;
    xbar += (x - xbar) / k;
    ybar += (y - ybar) / k;
    const double r = MNorm(xbar - x0, ybar - y0, steps.tau, steps.sigma, inst.a);
    double rho = 0.0;
    if (r > 0.0) {
      GapQuery q{xbar, ybar, r, steps.tau, steps.sigma, GapNorm::kM};
      rho = RhoM(inst, q).rho;
    }
    const double env = 8.0 * rep.dist_m / k;
    rep.rho.push_back(rho);
    rep.envelope.push_back(env);
    const double ratio = env > 0.0 ? rho / env : (rho > 0.0 ? INFINITY : 0.0);
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
  }
  rep.holds = rep.worst_ratio <= 1.0 + 1e-9;
  return rep;
}

}  // namespace rpdhg
