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


// Prints one PASS/FAIL line per acceptance criterion and exits non-zero if
// any of them fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "Eigen/Dense"
#include "rpdhg/ahr.h"
#include "rpdhg/dualgap.h"
#include "rpdhg/geolab.h"
#include "rpdhg/ipm.h"
#include "rpdhg/linalg.h"
#include "rpdhg/model.h"
#include "rpdhg/pdhg.h"
#include "rpdhg/rescale.h"
#include "test_util.h"

namespace rpdhg {
namespace {

using testing::BruteForceLp;
using testing::Pnu;
using testing::RandomSuite;
using testing::Rng;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Timer {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

std::string Fmt(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

double RoundSig2(double v) {
  if (v == 0.0 || !std::isfinite(v)) return v;
  const double e = std::floor(std::log10(std::fabs(v))) - 1.0;
  const double scale = std::pow(10.0, e);
  return std::round(v / scale) * scale;
}

bool Sig2Equal(double a, double b) {
  return std::fabs(RoundSig2(a) - RoundSig2(b)) <=
         1e-9 * std::max(std::fabs(b), 1e-300);
}

Outcome TableRow() {
  Timer timer;
  struct Row {
    double nu;
    double expected[6];
  };
  const Row rows[] = {{0.0, {1.0, 5.1e-1, 1.6e0, 4.6e-2, 5.7e1, 1.0e1}},
                      {1e-4, {1.0, 5.0e-5, 2.4e-1, 4.5e-6, 5.3e4, 1.0e1}}};
  const char* names[] = {"kappa", "delta_bar", "D", "r", "D/r", "max|w*|"};
  bool pass = true;
  std::ostringstream out;
  for (const Row& row : rows) {
    AnalyzeOptions opts;
    opts.sweep = false;
    const GeometryReport rep = Analyze(WithCaches(Pnu(row.nu)), opts);
    const double got[6] = {rep.kappa,
                           rep.delta_bar,
                           rep.at_delta.diameter,
                           rep.at_delta.radius,
                           rep.at_delta.ratio(),
                           rep.optimal.max_norm};
    out << " nu=" << row.nu << ":";
    for (int k = 0; k < 6; ++k) {
      const bool ok = Sig2Equal(got[k], row.expected[k]);
      pass = pass && ok;
      out << " " << names[k] << "=" << Fmt("%.3g", got[k]) << "/"
          << Fmt("%.2g", row.expected[k]) << (ok ? "" : "*");
    }
  }
  const double secs = timer.Seconds();
  pass = pass && secs < 10.0;
  out << " (computed/expected, * = mismatch; " << Fmt("%.2f", secs) << " s)";
  return {pass, out.str()};
}

Outcome SweepShape() {
  const ClpInstance inst = WithCaches(Pnu(1e-4));
  const GeometryReport rep = Analyze(inst);
  const auto& sweep = rep.sweep;
  bool dh_monotone = true;
  for (size_t i = 1; i < sweep.size(); ++i) {
    const double prev = sweep[i - 1].hausdorff;
    if (sweep[i].hausdorff < prev * (1.0 - 1e-9) - 1e-15) dh_monotone = false;
  }
  // Plateau of D/r up to delta_bar, then a decline that ends at least an
  // order of magnitude lower.
  double below_min = std::numeric_limits<double>::infinity();
  double below_max = 0.0;
  bool declining = true;
  double prev_above = std::numeric_limits<double>::infinity();
  for (const auto& g : sweep) {
    if (g.delta <= rep.delta_bar * (1.0 + 1e-12)) {
      below_min = std::min(below_min, g.ratio());
      below_max = std::max(below_max, g.ratio());
    } else {
      if (g.ratio() > prev_above * (1.0 + 1e-9)) declining = false;
      prev_above = g.ratio();
    }
  }
  const double end_ratio = sweep.empty() ? 0.0 : sweep.back().ratio();
  const bool plateau = below_max <= 1.01 * below_min;
  const bool regime = plateau && declining && end_ratio <= 0.1 * below_min;
  std::ostringstream out;
  out << " points=" << sweep.size() << " dH_nondecreasing=" << dh_monotone
      << " D/r plateau below delta_bar=[" << Fmt("%.4g", below_min) << ","
      << Fmt("%.4g", below_max) << "] declining above=" << declining
      << " D/r at " << Fmt("%.2g", sweep.empty() ? 0.0 : sweep.back().delta)
      << "=" << Fmt("%.4g", end_ratio);
  return {dh_monotone && regime && sweep.size() > 10, out.str()};
}

Outcome IterationBounds() {
  Timer timer;
  const ClpInstance original = WithCaches(Pnu(1e-4));
  const ClpInstance inst = WithCaches(ProjectCToNullspace(original));
  const double f_star = 1.0 - inst.objective_offset;
  const StepSizes steps = DefaultStepSizes(inst);
  bool pass = true;
  std::ostringstream out;
  for (int e = 1; e <= 7; ++e) {
    const double eps = std::pow(10.0, -e);
    const ToleranceTriple triple{eps, eps, eps};
    SolveOptions opts;
    opts.restart.check_every = 1;
    opts.stop.anchors_only = true;
    opts.stop.eps = 0.5;
    opts.stop.max_iters = 2000000000;
    opts.record_trace = false;
    opts.stop.error = [&](const Vec& x, const Vec& y) {
      return CheckEpsTolerance(inst, MakePoint(inst, x, y), triple, f_star)
                     .first
                 ? 0.0
                 : 1.0;
    };
    const SolveResult run = SolveRpdhg(inst, steps, opts);
    AnalyzeOptions ao;
    ao.eps = triple;
    const GeometryReport rep = Analyze(original, ao);
    const bool ok = run.status == SolveStatus::kOptimal &&
                    run.iterations <= rep.bounds.t_clp_inf &&
                    run.iterations <= rep.bounds.t_lp;
    pass = pass && ok;
    out << " 1e-" << e << ":" << run.iterations << "<="
        << Fmt("%.2g", rep.bounds.t_clp_inf) << "," << Fmt("%.2g", rep.bounds.t_lp)
        << (ok ? "" : "*");
  }
  const double secs = timer.Seconds();
  out << " (" << Fmt("%.2f", secs) << " s)";
  return {pass && secs < 300.0, out.str()};
}

struct SuiteEntry {
  ClpInstance inst;
  Vec x_star;
  Vec y_star;
  StepSizes steps;
};

std::vector<SuiteEntry> OracleSuite(bool* oracle_ok) {
  std::vector<SuiteEntry> out;
  *oracle_ok = true;
  const auto suite = RandomSuite(20, 101);
  for (size_t k = 0; k < suite.size(); ++k) {
    SuiteEntry e;
    e.inst = WithCaches(suite[k]);
    const auto opt = BruteForceLp(e.inst);
    *oracle_ok = *oracle_ok && opt.found &&
                 std::fabs(opt.objective - testing::kRandomSuiteOptima[k]) <=
                     1e-9 * std::max(1.0, std::fabs(opt.objective));
    e.x_star = opt.x;
    e.y_star = opt.y;
    e.steps = PracticalStepSizes(e.inst.spectra->lambda_max, 0.9);
    out.push_back(std::move(e));
  }
  return out;
}

Outcome Nonexpansive() {
  bool oracle_ok = false;
  const auto suite = OracleSuite(&oracle_ok);
  double worst = 0.0;
  int64_t steps_checked = 0;
  for (const auto& e : suite) {
    const double star_norm =
        NNorm(e.x_star, e.y_star, e.steps.tau, e.steps.sigma);
    SolveOptions opts;
    opts.stop.eps = 1e-8;
    opts.stop.max_iters = 20000;
    opts.record_trace = false;
    opts.on_step = [&](const Vec& x, const Vec& y, const Vec& xn,
                       const Vec& yn) {
      const double before = MNorm(x - e.x_star, y - e.y_star, e.steps.tau,
                                  e.steps.sigma, e.inst.a);
      const double after = MNorm(xn - e.x_star, yn - e.y_star, e.steps.tau,
                                 e.steps.sigma, e.inst.a);
      // Evaluating a difference norm carries roundoff proportional to the
      // norms of its operands.
      const double roundoff =
          64.0 * std::numeric_limits<double>::epsilon() *
          (NNorm(x, y, e.steps.tau, e.steps.sigma) + star_norm);
      if (before > 0.0) {
        worst = std::max(worst, (after - before - roundoff) / before);
      }
      ++steps_checked;
    };
    SolveRpdhg(e.inst, e.steps, opts);
  }
  std::ostringstream out;
  out << " instances=" << suite.size() << " steps=" << steps_checked
      << " worst relative increase=" << Fmt("%.2e", worst)
      << " oracle_frozen_match=" << oracle_ok;
  return {oracle_ok && worst <= 1e-9, out.str()};
}

Outcome Sublinear() {
  bool oracle_ok = false;
  const auto suite = OracleSuite(&oracle_ok);
  bool pass = oracle_ok;
  double worst = 0.0;
  for (const auto& e : suite) {
    Eigen::MatrixXd z(e.inst.n() + e.inst.m(), 1);
    z.col(0) << e.x_star, e.y_star;
    const SublinearReport rep =
        SublinearCheck(e.inst, e.steps, Vec::Zero(e.inst.n()),
                       Vec::Zero(e.inst.m()), z, 1000);
    pass = pass && rep.holds;
    worst = std::max(worst, rep.worst_ratio);
  }
  std::ostringstream out;
  out << " instances=" << suite.size() << " iterations=1000"
      << " worst rho/envelope=" << Fmt("%.3g", worst);
  return {pass, out.str()};
}

// sup of the Lagrangian gap over the N-ball by sampling its boundary arc and
// the chord on x = 0.
double BruteRhoN(double a, double b, double c, double x, double y, double r,
                 double tau, double sigma) {
  const double h1 = a * y - c;
  const double h2 = b - a * x;
  double best = 0.0;
  const int samples = 2000000;
  for (int k = 0; k < samples; ++k) {
    const double t = 2.0 * M_PI * k / samples;
    const double dx = r * std::sqrt(tau) * std::cos(t);
    const double dy = r * std::sqrt(sigma) * std::sin(t);
    if (x + dx < 0.0) continue;
    best = std::max(best, h1 * dx + h2 * dy);
  }
  const double rem = r * r - x * x / tau;
  if (rem >= 0.0) {
    const double half = std::sqrt(sigma * rem);
    for (int k = 0; k <= 200000; ++k) {
      const double dy = -half + 2.0 * half * k / 200000;
      best = std::max(best, h1 * (-x) + h2 * dy);
    }
  }
  return best / r;
}

ClpInstance Scalar(double a, double b, double c) {
  Eigen::MatrixXd m(1, 1);
  m(0, 0) = a;
  return WithCaches(MakeInstance("scalar", SparseMatrix::FromDense(m),
                                 Vec::Constant(1, b), Vec::Constant(1, c),
                                 ConeSpec::NonNeg(1)));
}

Outcome GapCertificates() {
  struct Fixture {
    double a, b, c, x, y, r, tau, sigma;
  };
  const Fixture fixtures[] = {
      {1.0, 1.0, 1.0, 0.5, 0.2, 0.3, 1.0, 1.0},
      {2.0, 1.0, 3.0, 0.1, -0.4, 1.0, 0.4, 0.1},
      {-1.5, 2.0, 0.5, 2.0, 1.0, 0.7, 0.2, 0.8},
      {3.0, -1.0, 2.0, 0.0, 0.0, 0.5, 0.1, 0.1},
      {1.0, 4.0, -2.0, 1.0, 3.0, 2.5, 1.0, 0.25}};
  double worst_grid = 0.0;
  for (const auto& f : fixtures) {
    const ClpInstance inst = Scalar(f.a, f.b, f.c);
    GapQuery q;
    q.x = Vec::Constant(1, f.x);
    q.y = Vec::Constant(1, f.y);
    q.r = f.r;
    q.tau = f.tau;
    q.sigma = f.sigma;
    const double rho = RhoN(inst, q).rho;
    const double brute =
        BruteRhoN(f.a, f.b, f.c, f.x, f.y, f.r, f.tau, f.sigma);
    worst_grid = std::max(worst_grid,
                          std::fabs(rho - brute) / std::max(1.0, brute));
  }

  Rng rng(77);
  int sandwich_fail = 0;
  int mono_fail = 0;
  for (int k = 0; k < 50; ++k) {
    const ClpInstance inst = WithCaches(testing::RandomLp(500 + k % 10, 2, 4));
    const double lmax = inst.spectra->lambda_max;
    const double ta = rng.Uniform(0.1, 2.0);
    const double tb = 0.25 / ta * rng.Uniform(0.2, 1.0);
    GapQuery q;
    q.tau = ta / lmax;
    q.sigma = tb / lmax;
    q.x = Vec(4);
    for (int j = 0; j < 4; ++j) q.x[j] = rng.Uniform(0.0, 2.0);
    q.y = rng.NormalVec(2);
    q.r = std::pow(10.0, rng.Uniform(-2.0, 1.0));
    const double rn = RhoN(inst, q).rho;
    q.norm = GapNorm::kM;
    const double rm = RhoM(inst, q).rho;
    const double upper =
        1.0 / std::sqrt(1.0 - std::sqrt(q.tau * q.sigma) * lmax);
    const double tol = 1e-7 * std::max(1.0, rn);
    if (rn / std::sqrt(2.0) > rm + tol || rm > upper * rn + tol) {
      ++sandwich_fail;
    }
    q.norm = GapNorm::kN;
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 25; ++i) {
      q.r = std::pow(10.0, -3.0 + 6.0 * i / 24.0);
      const double v = RhoN(inst, q).rho;
      if (v > prev * (1.0 + 1e-9) + 1e-14) ++mono_fail;
      prev = v;
    }
  }
  std::ostringstream out;
  out << " grid worst rel diff=" << Fmt("%.2e", worst_grid)
      << " sandwich failures=" << sandwich_fail << "/50"
      << " monotonicity failures=" << mono_fail;
  return {worst_grid <= 1e-4 && sandwich_fail == 0 && mono_fail == 0,
          out.str()};
}

Outcome RescaledGeometry() {
  Timer timer;
  const ClpInstance inst = WithCaches(Pnu(1e-4));
  bool pass = true;
  std::ostringstream out;
  for (double eta : {10.0, 100.0, 1000.0}) {
    const PrimalDualPoint w = CentralPoint(inst, eta);
    const RescaledGeometryReport rep = RescaledGeometryCheck(inst, w, eta);
    pass = pass && rep.all_ok();
    out << " eta=" << eta << ":D/r=" << Fmt("%.3g", rep.diameter / rep.radius)
        << "<=" << Fmt("%.4g", rep.ratio_bound)
        << (rep.all_ok() ? "" : "*");
  }
  const double secs = timer.Seconds();
  out << " (" << Fmt("%.2f", secs) << " s)";
  return {pass && secs < 30.0, out.str()};
}

int64_t RescaledIterations(const ClpInstance& inst, const Rescaling& base) {
  const Rescaling r = WithCompletePreconditioner(inst, base);
  SolveOptions opts;
  opts.stop.eps = 1e-8;
  opts.stop.max_iters = 2000000;
  opts.record_trace = false;
  const RescaledSolve rs = SolveRescaled(inst, r, opts);
  if (rs.result.status != SolveStatus::kOptimal) return -1;
  return rs.result.iterations;
}

int64_t CentralIterations(const ClpInstance& inst, double delta) {
  const IpmResult ip = InteriorPointAtGap(inst, delta);
  HessianOptions ho;
  ho.mode = EtaMode::kTheory;
  const Rescaling r = HessianRescaling(
      inst, {ip.iterate.x, ip.iterate.y, ip.iterate.s}, ho);
  return RescaledIterations(inst, r);
}

std::vector<ClpInstance> SpeedupFixtures() {
  std::vector<ClpInstance> out = {WithCaches(Pnu(1e-4))};
  for (const char* f : {"diet.mps", "transport.mps", "production.mps"}) {
    out.push_back(WithCaches(LoadInstance(testing::DataPath(f))));
  }
  return out;
}

Outcome RescalingSpeedup() {
  bool beats_easy = true;
  int not_worse = 0;
  std::ostringstream out;
  const auto fixtures = SpeedupFixtures();
  for (const auto& inst : fixtures) {
    const int64_t easy = RescaledIterations(inst, EasyColumnRescaling(inst));
    const int64_t c50 = CentralIterations(inst, 0.5);
    const int64_t c01 = CentralIterations(inst, 0.01);
    const bool ok = c01 >= 0 && (easy < 0 || c01 < easy);
    beats_easy = beats_easy && ok;
    if (c01 >= 0 && (c50 < 0 || c01 <= c50)) ++not_worse;
    out << " " << inst.name << ":easy=" << easy << ",c0.5=" << c50
        << ",c0.01=" << c01 << (ok ? "" : "*");
  }
  out << " c0.01<=c0.5 on " << not_worse << "/" << fixtures.size();
  return {beats_easy && not_worse >= 3, out.str()};
}

Outcome InteriorPoint() {
  const auto suite = RandomSuite(10, 201);
  bool pass = true;
  int reached = 0;
  for (const auto& inst : suite) {
    IpmBudget budget;
    budget.deterministic = true;
    budget.time_limit_s = 1.0;
    budget.target_rel_error = 1e-1;
    const IpmResult res = CpCgm(inst, budget);
    const auto& it = res.iterate;
    bool ok = res.status == IpmStatus::kTargetReached &&
              it.relative_error <= 1e-1 && it.x.minCoeff() > 0.0 &&
              it.s.minCoeff() > 0.0;
    const auto& mu = res.state.mu_history;
    for (size_t i = 1; i < mu.size(); ++i) ok = ok && mu[i] < mu[i - 1];
    if (ok) ++reached;
    pass = pass && ok;
  }
  // Resume: t then t equals one run of 2t.
  bool resume_ok = true;
  for (const auto& inst : suite) {
    IpmBudget half;
    half.deterministic = true;
    half.target_rel_error = 0.0;
    half.time_limit_s = 2e-5;
    IpmBudget full = half;
    full.time_limit_s = 4e-5;
    const IpmResult a = CpCgm(inst, half);
    const IpmResult b = CpCgm(inst, half, &a.state);
    const IpmResult c = CpCgm(inst, full);
    resume_ok = resume_ok && b.state.mu_history == c.state.mu_history &&
                b.state.x == c.state.x && b.state.y == c.state.y &&
                b.state.s == c.state.s && c.state.outer > a.state.outer;
  }
  std::ostringstream out;
  out << " target reached with interior iterates and decreasing mu on "
      << reached << "/" << suite.size() << "; resume identical=" << resume_ok;
  return {pass && resume_ok, out.str()};
}

AhrConfig DeterministicAhr() {
  AhrConfig cfg;
  cfg.deterministic = true;
  cfg.t0 = 1e-6;
  cfg.eps = 1e-8;
  return cfg;
}

Outcome AdaptiveDriver() {
  const ClpInstance inst = WithCaches(Pnu(1e-4));
  struct Script {
    std::vector<double> eps;
    AhrExit exit;
    int fixed_round;
    std::vector<AhrDecision> decisions;
  };
  const std::vector<Script> scripts = {
      {{1e-5}, AhrExit::kAcceptNew, 1, {AhrDecision::kAcceptNew}},
      {{1e-3, 1e-2},
       AhrExit::kRevert,
       1,
       {AhrDecision::kContinue, AhrDecision::kRevert}},
      {{0.5, 0.9, 1e-5},
       AhrExit::kAcceptNew,
       3,
       {AhrDecision::kContinue, AhrDecision::kContinue,
        AhrDecision::kAcceptNew}},
      {{1e-2, 1e-3, 1e-1},
       AhrExit::kRevert,
       2,
       {AhrDecision::kContinue, AhrDecision::kContinue,
        AhrDecision::kRevert}}};
  bool scripted_ok = true;
  for (const auto& s : scripts) {
    AhrConfig cfg = DeterministicAhr();
    cfg.max_final_iters = 20000;
    cfg.eps_override = [&](int round, double measured) {
      return round <= static_cast<int>(s.eps.size()) ? s.eps[round - 1]
                                                     : measured;
    };
    const AhrResult res = SolveAhr(inst, cfg);
    bool ok = res.exit == s.exit && res.fixed_round == s.fixed_round &&
              res.rounds.size() == s.decisions.size() &&
              res.rescaling.eta == res.rounds[s.fixed_round - 1].eta;
    for (size_t k = 0; ok && k < s.decisions.size(); ++k) {
      ok = res.rounds[k].decision == s.decisions[k] &&
           std::fabs(res.rounds[k].t - cfg.t0 * std::pow(2.0, k)) <=
               1e-15 * res.rounds[k].t;
    }
    scripted_ok = scripted_ok && ok;
  }
  const AhrResult e2e = SolveAhr(inst, DeterministicAhr());
  const bool e2e_ok = e2e.result.status == SolveStatus::kOptimal &&
                      e2e.result.relative_error <= 1e-8;
  std::ostringstream out;
  out << " scripted paths ok=" << scripted_ok << " end-to-end E_r="
      << Fmt("%.2e", e2e.result.relative_error) << " exit="
      << AhrExitName(e2e.exit) << " rounds=" << e2e.rounds.size()
      << " iterations=" << e2e.total_iterations;
  return {scripted_ok && e2e_ok, out.str()};
}

Outcome Invariance() {
  std::vector<std::pair<ClpInstance, double>> cases = {
      {WithCaches(Pnu(1e-4)), 1.0}};
  const auto suite = RandomSuite(3, 101);
  for (int k = 0; k < 3; ++k) {
    cases.push_back({WithCaches(suite[k]), testing::kRandomSuiteOptima[k]});
  }
  Rng rng(4242);
  double worst_gap = 0.0, worst_obj = 0.0, worst_trip = 0.0;
  int samples = 0;
  for (const auto& [inst, f_star] : cases) {
    const PrimalDualPoint central = CentralPoint(inst, 100.0);
    HessianOptions ho;
    ho.mode = EtaMode::kTheory;
    Rescaling r = HessianRescaling(inst, central, ho);
    r = WithCompletePreconditioner(inst, r);
    const RescaledInstance resc = BuildRescaled(inst, r, false);
    const Eigen::MatrixXd a = inst.a.ToDense();
    const Eigen::MatrixXd null =
        Eigen::FullPivLU<Eigen::MatrixXd>(a).kernel();
    const int per_case = 100 / static_cast<int>(cases.size());
    for (int k = 0; k < per_case; ++k, ++samples) {
      const Vec x = central.x + null * rng.NormalVec(null.cols());
      const Vec y = rng.NormalVec(inst.m());
      const Vec s = inst.c - a.transpose() * y;
      const auto [xt, st] = Phi(r, x, s);
      const double g = Gap(inst, x, s);
      const double gt = Gap(resc.instance, xt, st);
      worst_gap =
          std::max(worst_gap, std::fabs(g - gt) / std::max(1.0, std::fabs(g)));
      const double eo = EObj(inst, x, s, f_star);
      const double eot = EObj(resc.instance, xt, st, f_star);
      worst_obj = std::max(worst_obj,
                           std::fabs(eo - eot) / std::max(1.0, std::fabs(eo)));
      const PrimalDualPoint back = MapBack(inst, resc, xt, st, false);
      const PdhgPoint fwd = MapForward(resc, x, y);
      const PrimalDualPoint exact = MapBackExact(inst, resc, fwd.x, fwd.y);
      const double scale = std::max({1.0, x.norm(), s.norm(), y.norm()});
      worst_trip = std::max(
          {worst_trip, (back.x - x).norm() / scale,
           (back.s - s).norm() / scale, (exact.x - x).norm() / scale,
           (exact.y - y).norm() / scale});
    }
  }
  std::ostringstream out;
  out << " samples=" << samples << " gap=" << Fmt("%.1e", worst_gap)
      << " E_obj=" << Fmt("%.1e", worst_obj)
      << " round-trip=" << Fmt("%.1e", worst_trip);
  return {samples >= 100 && worst_gap <= 1e-10 && worst_obj <= 1e-10 &&
              worst_trip <= 1e-10,
          out.str()};
}

Outcome WidthSandwich() {
  std::vector<ClpInstance> insts = {WithCaches(Pnu(0.0)),
                                    WithCaches(Pnu(1e-4))};
  for (const auto& inst : SpeedupFixtures()) {
    if (inst.name != "p_nu") insts.push_back(inst);
  }
  for (const auto& inst : RandomSuite(5, 101)) {
    insts.push_back(WithCaches(inst));
  }
  int ok = 0;
  std::ostringstream out;
  for (const auto& inst : insts) {
    AnalyzeOptions opts;
    opts.sweep = false;
    const GeometryReport rep = Analyze(inst, opts);
    if (rep.optimal.sandwich_ok) {
      ++ok;
    } else {
      out << " " << inst.name << ":" << Fmt("%.3g", rep.optimal.sandwich_lower)
          << "<=" << Fmt("%.3g", rep.optimal.sup_r_over_gamma) << "<="
          << Fmt("%.3g", rep.optimal.sandwich_upper) << "*";
    }
  }
  out << " holds on " << ok << "/" << insts.size() << " analyzed instances";
  return {ok == static_cast<int>(insts.size()), out.str()};
}

}  // namespace
}  // namespace rpdhg

int main() {
  using rpdhg::Outcome;
  struct Criterion {
    const char* label;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"p_nu condition numbers at delta_bar", rpdhg::TableRow},
      {"delta sweep shape on p_nu(1e-4)", rpdhg::SweepShape},
      {"rPDHG iterations within geometric bounds", rpdhg::IterationBounds},
      {"M-norm nonexpansiveness on random LPs", rpdhg::Nonexpansive},
      {"sublinear envelope on random LPs", rpdhg::Sublinear},
      {"normalized duality gap certificates", rpdhg::GapCertificates},
      {"Hessian-rescaled sublevel geometry", rpdhg::RescaledGeometry},
      {"central-path rescaling speedup", rpdhg::RescalingSpeedup},
      {"CP-CGM interiority, progress and resume", rpdhg::InteriorPoint},
      {"adaptive rescaling driver", rpdhg::AdaptiveDriver},
      {"gap invariance and solution maps", rpdhg::Invariance},
      {"width sandwich", rpdhg::WidthSandwich},
  };
  int failures = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string(" exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %02d %s:%s\n", o.pass ? "PASS" : "FAIL", index, c.label,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
