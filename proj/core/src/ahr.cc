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

#include "rpdhg/ahr.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "rpdhg/cones.h"
#include "rpdhg/errors.h"

namespace rpdhg {
namespace {

using Json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double Since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

double OpsPerIteration(const ClpInstance& inst) {
  return 2.0 * static_cast<double>(inst.a.nnz()) + 8.0 * (inst.m() + inst.n());
}

ErrorFn OriginalError(const ClpInstance& original, const RescaledInstance& rs) {
  return [&original, &rs](const Vec& xt, const Vec& yt) {
    const PrimalDualPoint w = MapBackExact(original, rs, xt, yt);
    return RelativeError(original, w.x, w.y);
  };
}

SolveOptions BaseOptions(const AhrConfig& cfg) {
  SolveOptions o;
  o.restart = cfg.restart;
  o.stop.eps = cfg.eps;
  o.record_trace = false;
  return o;
}

void FillResult(const ClpInstance& inst, const RescaledInstance& rs,
                const SolveResult& sr, double eps, AhrResult& out) {
  const PrimalDualPoint w = MapBackExact(inst, rs, sr.x, sr.y);
  out.result = sr;
  out.result.x = w.x;
  out.result.y = w.y;
  out.result.s = w.s;
  out.result.relative_error = RelativeError(inst, w.x, w.y);
  out.result.error = out.result.relative_error;
  out.result.status = out.result.relative_error <= eps
                          ? SolveStatus::kOptimal
                          : (sr.status == SolveStatus::kOptimal
                                 ? SolveStatus::kIterationLimit
                                 : sr.status);
  out.rescaling = rs.rescaling;
}

}  // namespace

void AhrConfig::Validate() const {
  const double eb = EpsBar();
  const double eh = EpsHat();
  if (!(eps > 0.0 && eps < eb && eb < eh && eh < 1.0)) {
    throw InputError("AHR tolerances must satisfy 0 < eps < eps_bar < eps_hat < 1");
  }
  if (!(t0 > 0.0) || !(omega > 0.0)) {
    throw InputError("AHR t0 and omega must be positive");
  }
  if (max_rounds < 1) throw InputError("AHR max_rounds must be >= 1");
}

std::string AhrDecisionName(AhrDecision d) {
  switch (d) {
    case AhrDecision::kContinue: return "continue";
    case AhrDecision::kAcceptNew: return "accept-new";
    case AhrDecision::kRevert: return "revert";
  }
  return "unknown";
}

std::string AhrExitName(AhrExit e) {
  switch (e) {
    case AhrExit::kAcceptNew: return "accept-new";
    case AhrExit::kRevert: return "revert";
    case AhrExit::kRoundLimit: return "round-limit";
    case AhrExit::kFallback: return "fallback";
  }
  return "unknown";
}

AhrResult SolveAhr(const ClpInstance& inst, const AhrConfig& cfg) {
  cfg.Validate();
  const auto start = Clock::now();
  AhrResult out;

  auto fallback = [&]() {
    out.exit = AhrExit::kFallback;
    out.fixed_round = 0;
    const RescaledInstance rs =
        BuildRescaled(inst, WithRuizPc(inst, IdentityRescaling(inst)), true);
    const double lam = EstimateSpectra(rs.instance.a).lambda_max;
    SolveOptions opts = BaseOptions(cfg);
    opts.stop.error = OriginalError(inst, rs);
    StepSizes steps = PracticalStepSizes(lam, 0.8);
    if (cfg.learn_steps) {
      const LearnedSelection sel =
          SelectLearnedSteps(rs.instance, lam, opts, cfg.learn_iters);
      steps = sel.chosen;
      out.learn_iterations = sel.iterations;
    }
    opts.stop.max_iters = cfg.max_final_iters;
    opts.stop.time_limit_s = cfg.time_limit_s - Since(start);
    const SolveResult sr = SolveRpdhg(rs.instance, steps, opts);
    out.steps = steps;
    FillResult(inst, rs, sr, cfg.eps, out);
    out.total_iterations = out.learn_iterations + sr.iterations;
    out.result.iterations = out.total_iterations;
    out.result.wall_time_s = Since(start);
    return out;
  };
  if (!inst.cone.IsOrthant()) return fallback();

  IpmState ipm;
  IpmIterate good;
  bool frozen = false;
  int learned = -1;
  double t = cfg.t0;
  double eps_prev = std::numeric_limits<double>::infinity();
  std::vector<RescaledInstance> rescaled;
  std::vector<SolveResult> outputs;
  std::vector<StepSizes> round_steps;
  rescaled.reserve(cfg.max_rounds);
  int64_t iterations = 0;

  for (int k = 1;; ++k) {
    AhrRound rd;
    rd.round = k;
    rd.t = t;
    if (!frozen) {
      IpmBudget b;
      b.time_limit_s = t;
      b.deterministic = cfg.deterministic;
      b.target_rel_error = cfg.eps;
      const IpmResult ir = CpCgm(inst, b, &ipm);
      rd.ipm_status = ir.status;
      const bool usable = (ir.status == IpmStatus::kTargetReached ||
                           ir.status == IpmStatus::kBudgetExhausted) &&
                          IsStrictlyInterior(inst.cone, ir.iterate.x);
      if (usable) {
        ipm = ir.state;
        good = ir.iterate;
      } else {
        if (k == 1) return fallback();
        frozen = true;
      }
    } else {
      rd.ipm_status = IpmStatus::kStalled;
    }
    rd.t_ipm_s = cfg.deterministic ? ipm.ops / cfg.ops_per_second
                                   : ipm.wall_time_s;
    rd.ipm_mu = good.mu;
    rd.ipm_x = good.x;
    rd.ipm_y = good.y;
    rd.ipm_s = good.s;

    HessianOptions ho;
    ho.mode = EtaMode::kAhr;
    Rescaling r = HessianRescaling(inst, {good.x, good.y, good.s}, ho);
    rd.eta = r.eta;
    if (cfg.ruiz_pc) r = WithRuizPc(inst, r);
    rescaled.push_back(BuildRescaled(inst, r, true));
    const RescaledInstance& rs = rescaled.back();
    const PdhgPoint warm = MapForward(rs, good.x, good.y);
    rd.warm_x = Project(inst.cone, warm.x);
    rd.warm_y = warm.y;

    const double lam = EstimateSpectra(rs.instance.a).lambda_max;
    SolveOptions opts = BaseOptions(cfg);
    opts.stop.error = OriginalError(inst, rs);
    opts.x0 = rd.warm_x;
    opts.y0 = rd.warm_y;
    if (k == 1 && cfg.learn_steps) {
      const LearnedSelection sel =
          SelectLearnedSteps(rs.instance, lam, opts, cfg.learn_iters);
      learned = sel.chosen_index;
      out.learn_iterations = sel.iterations;
    }
    const StepSizes steps = learned >= 0 ? LearnedStepPairs(lam)[learned]
                                         : PracticalStepSizes(lam, 0.8);
    round_steps.push_back(steps);
    if (cfg.deterministic) {
      opts.stop.max_iters = std::max<int64_t>(
          1, static_cast<int64_t>(cfg.omega * t * cfg.ops_per_second /
                                  OpsPerIteration(rs.instance)));
    } else {
      opts.stop.time_limit_s = cfg.omega * t;
    }
    SolveResult sr;
    try {
      sr = SolveRpdhg(rs.instance, steps, opts);
    } catch (const NumericalError&) {
      sr.x = rd.warm_x;
      sr.y = rd.warm_y;
      sr.error = std::numeric_limits<double>::infinity();
      sr.iterations = opts.stop.max_iters;
    }
    rd.pdhg_iterations = sr.iterations;
    iterations += sr.iterations;
    rd.eps_measured = sr.error;
    rd.eps_k = cfg.eps_override ? cfg.eps_override(k, sr.error) : sr.error;
    outputs.push_back(sr);

    if (rd.eps_k <= cfg.EpsBar()) {
      rd.decision = AhrDecision::kAcceptNew;
      out.exit = AhrExit::kAcceptNew;
    } else if (rd.eps_k > eps_prev && eps_prev <= cfg.EpsHat()) {
      rd.decision = AhrDecision::kRevert;
      out.exit = AhrExit::kRevert;
    } else if (k >= cfg.max_rounds) {
      out.exit = AhrExit::kRoundLimit;
    }
    out.rounds.push_back(rd);
    eps_prev = rd.eps_k;
    t *= 2.0;
    if (rd.decision != AhrDecision::kContinue ||
        out.exit == AhrExit::kRoundLimit) {
      break;
    }
  }

  const int idx = out.exit == AhrExit::kRevert
                      ? static_cast<int>(outputs.size()) - 2
                      : static_cast<int>(outputs.size()) - 1;
  out.fixed_round = idx + 1;
  const RescaledInstance& rs = rescaled[idx];
  out.steps = round_steps[idx];
  SolveResult sr = outputs[idx];
  if (!(sr.error <= cfg.eps)) {
    SolveOptions opts = BaseOptions(cfg);
    opts.stop.error = OriginalError(inst, rs);
    opts.x0 = sr.x;
    opts.y0 = sr.y;
    opts.stop.max_iters = cfg.max_final_iters;
    opts.stop.time_limit_s = cfg.time_limit_s - Since(start);
    sr = SolveRpdhg(rs.instance, out.steps, opts);
    iterations += sr.iterations;
  }
  FillResult(inst, rs, sr, cfg.eps, out);
  out.ipm_time_s = out.rounds.back().t_ipm_s;
  out.total_iterations = iterations + out.learn_iterations;
  out.result.iterations = out.total_iterations;
  out.result.matvecs = 2 * out.total_iterations;
  out.result.wall_time_s = Since(start);
  return out;
}

std::string RoundLogToCsv(const std::vector<AhrRound>& rounds) {
  std::ostringstream os;
  os.precision(17);
  os << "round,t_ipm_s,ipm_mu,eps_k,decision\n";
  for (const AhrRound& r : rounds) {
    os << r.round << ',' << r.t_ipm_s << ',' << r.ipm_mu << ',' << r.eps_k
       << ',' << AhrDecisionName(r.decision) << '\n';
  }
  return os.str();
}

std::vector<double> IdealBudgets(int count) {
  std::vector<double> b;
  for (int i = 1; i <= count; ++i) b.push_back(std::ldexp(1.0, i) / 4.0);
  return b;
}

IdealReport IdealSweep(const ClpInstance& inst, const AhrConfig& cfg,
                       const std::vector<double>& budgets) {
  cfg.Validate();
  if (!inst.cone.IsOrthant()) {
    throw UnsupportedError("ideal sweep needs CP-CGM, which is LP only");
  }
  IdealReport rep;
  rep.instance = inst.name;
  int learned = -1;
  for (double budget : budgets) {
    IdealEntry e;
    e.budget_s = budget;
    IpmBudget b;
    b.time_limit_s = budget;
    b.deterministic = cfg.deterministic;
    b.target_rel_error = cfg.eps;
    const IpmResult ir = CpCgm(inst, b);
    e.ipm_time_s = cfg.deterministic ? ir.state.ops / cfg.ops_per_second
                                     : ir.state.wall_time_s;
    if (!IsStrictlyInterior(inst.cone, ir.iterate.x)) {
      rep.entries.push_back(e);
      continue;
    }
    HessianOptions ho;
    ho.mode = EtaMode::kAhr;
    Rescaling r = HessianRescaling(inst, {ir.iterate.x, ir.iterate.y, ir.iterate.s}, ho);
    if (cfg.ruiz_pc) r = WithRuizPc(inst, r);
    const RescaledInstance rs = BuildRescaled(inst, r, true);
    const PdhgPoint warm = MapForward(rs, ir.iterate.x, ir.iterate.y);
    const double lam = EstimateSpectra(rs.instance.a).lambda_max;
    SolveOptions opts = BaseOptions(cfg);
    opts.stop.error = OriginalError(inst, rs);
    opts.x0 = Project(inst.cone, warm.x);
    opts.y0 = warm.y;
    if (learned < 0 && cfg.learn_steps) {
      learned = SelectLearnedSteps(rs.instance, lam, opts, cfg.learn_iters)
                    .chosen_index;
    }
    const StepSizes steps = learned >= 0 ? LearnedStepPairs(lam)[learned]
                                         : PracticalStepSizes(lam, 0.8);
    opts.stop.max_iters = cfg.max_final_iters;
    const auto ts = Clock::now();
    try {
      const SolveResult sr = SolveRpdhg(rs.instance, steps, opts);
      e.pdhg_iterations = sr.iterations;
      e.relative_error = sr.error;
      e.solved = sr.error <= cfg.eps;
    } catch (const NumericalError&) {
      e.relative_error = std::numeric_limits<double>::infinity();
    }
    e.pdhg_time_s = cfg.deterministic
                        ? e.pdhg_iterations * OpsPerIteration(rs.instance) /
                              cfg.ops_per_second
                        : Since(ts);
    rep.entries.push_back(e);
  }
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < rep.entries.size(); ++i) {
    if (rep.entries[i].solved && rep.entries[i].total_s() < best) {
      best = rep.entries[i].total_s();
      rep.best = static_cast<int>(i);
    }
  }
  return rep;
}

std::string IdealReportToJson(const IdealReport& r) {
  Json j;
  j["schema_version"] = 1;
  j["instance"] = r.instance;
  j["best"] = r.best;
  Json entries = Json::array();
  for (const IdealEntry& e : r.entries) {
    entries.push_back({{"budget_s", e.budget_s},
                       {"ipm_time_s", e.ipm_time_s},
                       {"pdhg_time_s", e.pdhg_time_s},
                       {"pdhg_iterations", e.pdhg_iterations},
                       {"relative_error", std::isfinite(e.relative_error)
                                              ? Json(e.relative_error)
                                              : Json(nullptr)},
                       {"solved", e.solved}});
  }
  j["entries"] = entries;
  return j.dump(2);
}

IdealReport IdealReportFromJson(const std::string& text) {
  IdealReport r;
  try {
    const Json j = Json::parse(text);
    r.instance = j.at("instance").get<std::string>();
    r.best = j.at("best").get<int>();
    for (const Json& e : j.at("entries")) {
      IdealEntry x;
      x.budget_s = e.at("budget_s").get<double>();
      x.ipm_time_s = e.at("ipm_time_s").get<double>();
      x.pdhg_time_s = e.at("pdhg_time_s").get<double>();
      x.pdhg_iterations = e.at("pdhg_iterations").get<int64_t>();
      x.relative_error = e.at("relative_error").is_null()
                             ? std::numeric_limits<double>::infinity()
                             : e.at("relative_error").get<double>();
      x.solved = e.at("solved").get<bool>();
      r.entries.push_back(x);
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("ideal report: ") + e.what(), 0);
  }
  return r;
}

}  // namespace rpdhg
