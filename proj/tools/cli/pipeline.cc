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


#include "pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "rpdhg/errors.h"

namespace rpdhg::cli {
namespace {

using Json = nlohmann::json;

bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool IsHessian(const std::string& rescaling) {
  return rescaling.rfind("hessian:", 0) == 0;
}

double HessianDelta(const std::string& rescaling) {
  const std::string tail = rescaling.substr(8);
  size_t used = 0;
  double delta = 0.0;
  try {
    delta = std::stod(tail, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tail.size() || !(delta > 0.0)) {
    throw InputError("bad rescaling '" + rescaling +
                     "': expected hessian:<positive delta>");
  }
  return delta;
}

std::string EffectiveD2(const SolveConfig& cfg) {
  if (cfg.d2 != "auto") return cfg.d2;
  return IsHessian(cfg.rescaling) ? "complete" : "identity";
}

// Rough work units of one OnePDHG call.
double OpsPerIteration(const ClpInstance& inst) {
  return 2.0 * static_cast<double>(inst.a.nnz()) + 4.0 * (inst.m() + inst.n());
}

Rescaling BuildRescaling(const ClpInstance& inst, const SolveConfig& cfg,
                         SolveOutcome& out) {
  Rescaling r;
  if (cfg.rescaling == "none") {
    r = IdentityRescaling(inst);
  } else if (cfg.rescaling == "easy-column") {
    r = EasyColumnRescaling(inst);
  } else if (cfg.rescaling == "ruiz-pc") {
    r = WithRuizPc(inst, IdentityRescaling(inst));
  } else {
    const double delta = HessianDelta(cfg.rescaling);
    IpmBudget budget;
    budget.time_limit_s = cfg.ipm_time_limit_s;
    budget.deterministic = cfg.deterministic;
    const IpmResult ipm = InteriorPointAtGap(inst, delta, budget);
    if (ipm.status != IpmStatus::kTargetReached) {
      out.warnings.push_back("interior point stopped at E_r " +
                             std::to_string(ipm.iterate.relative_error) +
                             " (" + IpmStatusName(ipm.status) + ")");
    }
    const PrimalDualPoint w{ipm.iterate.x, ipm.iterate.y, ipm.iterate.s};
    r = HessianRescaling(inst, w, HessianOptions{});
    out.extra["interior_point"] = {
        {"target", delta},
        {"relative_error", ipm.iterate.relative_error},
        {"outer", ipm.iterate.outer},
        {"status", IpmStatusName(ipm.status)}};
  }
  const std::string d2 = EffectiveD2(cfg);
  if (d2 == "complete") {
    r = WithCompletePreconditioner(inst, std::move(r));
  } else if (d2 == "ruiz-pc") {
    r = WithRuizPc(inst, std::move(r));
  }
  return r;
}

void FillFromResult(const SolveResult& res, SolveOutcome& out) {
  out.x = res.x;
  out.y = res.y;
  out.s = res.s;
  out.status = StatusName(res.status);
  out.exit_code = res.status == SolveStatus::kOptimal ? 0 : 2;
  out.iterations = res.iterations;
  out.restarts = res.restarts;
  out.matvecs = res.matvecs;
  out.trace = res.trace;
}

void RunRpdhg(const ClpInstance& inst, const SolveConfig& cfg,
              SolveOutcome& out) {
  SolveOptions opts;
  opts.restart.flexible = cfg.flexible;
  opts.restart.check_every = cfg.check_every;
  opts.stop.eps = cfg.eps_rel;
  opts.stop.max_iters = cfg.max_iters;
  if (cfg.deterministic) {
    if (std::isfinite(cfg.time_limit_s)) {
      const double iters =
          cfg.time_limit_s * kDeterministicOpsPerSecond / OpsPerIteration(inst);
      opts.stop.max_iters =
          std::min<int64_t>(opts.stop.max_iters, static_cast<int64_t>(iters));
    }
  } else {
    opts.stop.time_limit_s = cfg.time_limit_s;
  }

  const Rescaling r = BuildRescaling(inst, cfg, out);
  std::optional<StepSizes> steps;
  int64_t learn_iters = 0;
  if (cfg.steps == "theorem") {
    steps = DefaultStepSizes(WithCaches(BuildRescaled(inst, r, true).instance));
  } else if (cfg.steps == "learned") {
    const ClpInstance rescaled =
        WithCaches(BuildRescaled(inst, r, true).instance);
    SolveOptions learn = opts;
    learn.record_trace = false;
    const LearnedSelection sel =
        SelectLearnedSteps(rescaled, rescaled.spectra->lambda_max, learn);
    steps = sel.chosen;
    learn_iters = sel.iterations;
  }
  const RescaledSolve rs = SolveRescaled(inst, r, opts, steps);
  FillFromResult(rs.result, out);
  out.iterations += learn_iters;
  out.matvecs += 2 * learn_iters;
  out.rescaling = r;
  out.steps = rs.steps;
  if (learn_iters > 0) out.extra["learn_iterations"] = learn_iters;
}

void RunAhr(const ClpInstance& inst, const SolveConfig& cfg,
            SolveOutcome& out) {
  AhrConfig ac;
  ac.t0 = cfg.t0;
  ac.omega = cfg.omega;
  ac.eps = cfg.eps_rel;
  ac.deterministic = cfg.deterministic;
  ac.learn_steps = cfg.learn;
  ac.max_final_iters = cfg.max_iters;
  ac.time_limit_s = cfg.deterministic ? std::numeric_limits<double>::infinity()
                                      : cfg.time_limit_s;
  ac.restart.flexible = cfg.flexible;
  ac.restart.check_every = cfg.check_every;
  ac.Validate();
  const AhrResult res = SolveAhr(inst, ac);
  FillFromResult(res.result, out);
  out.iterations = res.total_iterations;
  out.matvecs = 2 * res.total_iterations;
  out.rescaling = res.rescaling;
  out.steps = res.steps;
  out.rounds = res.rounds;
  out.extra["ahr"] = {{"exit", AhrExitName(res.exit)},
                      {"fixed_round", res.fixed_round},
                      {"rounds", static_cast<int>(res.rounds.size())},
                      {"learn_iterations", res.learn_iterations},
                      {"ipm_time_s", res.ipm_time_s}};
}

void RunCpCgm(const ClpInstance& inst, const SolveConfig& cfg,
              SolveOutcome& out) {
  IpmBudget budget;
  budget.time_limit_s = cfg.time_limit_s;
  budget.target_rel_error = cfg.target;
  budget.deterministic = cfg.deterministic;
  std::optional<IpmState> resume;
  if (!cfg.resume_state.empty()) {
    resume = IpmStateFromJson(ReadTextFile(cfg.resume_state));
  }
  const IpmResult res = CpCgm(inst, budget, resume ? &*resume : nullptr);
  out.x = res.iterate.x;
  out.y = res.iterate.y;
  out.s = res.iterate.s;
  out.status = IpmStatusName(res.status);
  out.exit_code = res.status == IpmStatus::kTargetReached ? 0 : 2;
  out.iterations = res.iterate.outer;
  out.ipm_state = res.state;
  out.extra["ipm"] = {{"mu", res.iterate.mu},
                      {"outer", res.iterate.outer},
                      {"target", cfg.target}};
}

}  // namespace

Problem LoadProblem(const std::string& path) {
  Problem p;
  if (EndsWith(path, ".json")) {
    p.instance = LoadInstance(path);
    return p;
  }
  StandardForm sf = ToStandardForm(ReadMps(path));
  if (sf.instance.name.empty()) sf.instance.name = path;
  p.instance = sf.instance;
  p.standard_form = std::move(sf);
  return p;
}

void ValidateSolveConfig(const SolveConfig& cfg) {
  const auto fail = [](const std::string& msg) { throw InputError(msg); };
  if (cfg.method != "rpdhg" && cfg.method != "rpdhg-ahr" &&
      cfg.method != "cp-cgm") {
    fail("unknown method '" + cfg.method + "'");
  }
  if (cfg.rescaling != "none" && cfg.rescaling != "easy-column" &&
      cfg.rescaling != "ruiz-pc" && cfg.rescaling != "ahr" &&
      !IsHessian(cfg.rescaling)) {
    fail("unknown rescaling '" + cfg.rescaling + "'");
  }
  if (IsHessian(cfg.rescaling)) HessianDelta(cfg.rescaling);
  if (cfg.d2 != "auto" && cfg.d2 != "identity" && cfg.d2 != "complete" &&
      cfg.d2 != "ruiz-pc") {
    fail("unknown d2 '" + cfg.d2 + "'");
  }
  if (cfg.steps != "practical" && cfg.steps != "theorem" &&
      cfg.steps != "learned") {
    fail("unknown steps '" + cfg.steps + "'");
  }
  if (cfg.method == "rpdhg" && cfg.rescaling == "ahr") {
    fail("rescaling 'ahr' requires --method rpdhg-ahr");
  }
  if (cfg.method == "rpdhg-ahr") {
    if (cfg.rescaling != "ahr" && cfg.rescaling != "none") {
      fail("--method rpdhg-ahr chooses its own rescaling; use --rescaling ahr");
    }
    if (cfg.d2 != "auto") fail("--d2 does not apply to --method rpdhg-ahr");
  }
  if (cfg.method == "cp-cgm") {
    if (cfg.rescaling != "none") fail("--rescaling does not apply to cp-cgm");
    if (cfg.d2 != "auto") fail("--d2 does not apply to cp-cgm");
  } else if (!cfg.resume_state.empty()) {
    fail("--resume applies to cp-cgm only");
  }
  if (cfg.rescaling == "ruiz-pc" && cfg.d2 != "auto" && cfg.d2 != "identity") {
    fail("--rescaling ruiz-pc already sets D2");
  }
  if (!(cfg.eps_rel > 0.0)) fail("--eps-rel must be positive");
  if (!(cfg.target > 0.0)) fail("--target must be positive");
  if (cfg.max_iters <= 0) fail("--max-iters must be positive");
  if (!(cfg.time_limit_s > 0.0)) fail("--time-limit must be positive");
  if (cfg.check_every <= 0) fail("--check-every must be positive");
}

SolveConfig ParseMethodSpec(const std::string& spec, SolveConfig base) {
  std::string body = spec;
  const size_t at = body.find('@');
  if (at != std::string::npos) {
    base.d2 = body.substr(at + 1);
    body = body.substr(0, at);
  }
  const size_t colon = body.find(':');
  base.method = body.substr(0, colon);
  if (colon != std::string::npos) {
    base.rescaling = body.substr(colon + 1);
  } else {
    base.rescaling = base.method == "rpdhg-ahr" ? "ahr" : "none";
  }
  ValidateSolveConfig(base);
  return base;
}

SolveOutcome RunSolve(const ClpInstance& original, const SolveConfig& cfg) {
  ValidateSolveConfig(cfg);
  ClpInstance inst = original;
  inst.Validate();
  SpectralOptions spectral;
  spectral.seed = cfg.seed;
  if (!inst.a.IsZero()) inst.spectra = EstimateSpectra(inst.a, spectral);
  inst = WithCaches(std::move(inst));

  SolveOutcome out;
  const auto start = std::chrono::steady_clock::now();
  if (cfg.method == "cp-cgm") {
    RunCpCgm(inst, cfg, out);
  } else if (cfg.method == "rpdhg-ahr") {
    RunAhr(inst, cfg, out);
  } else {
    RunRpdhg(inst, cfg, out);
  }
  out.wall_time_s = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  out.s = MakePoint(original, out.x, out.y).s;
  out.e_r = RelativeError(original, out.x, out.y);
  return out;
}

Json VecToJson(const Vec& v) {
  return Json(std::vector<double>(v.data(), v.data() + v.size()));
}

Json SolutionJson(const Problem& problem, const SolveConfig& cfg,
                  const SolveOutcome& out) {
  const ClpInstance& inst = problem.instance;
  Json j;
  j["schema_version"] = 1;
  j["instance"] = inst.name;
  j["method"] = cfg.method;
  if (cfg.method != "cp-cgm") {
    j["rescaling"] = cfg.method == "rpdhg-ahr" ? "ahr" : cfg.rescaling;
  }
  j["status"] = out.status;
  j["x"] = VecToJson(out.x);
  j["y"] = VecToJson(out.y);
  j["s"] = VecToJson(out.s);
  j["objective"] = inst.c.dot(out.x) + inst.objective_offset;
  j["E_r"] = out.e_r;
  j["iterations"] = out.iterations;
  j["restarts"] = out.restarts;
  j["matvecs"] = out.matvecs;
  j["wall_time"] = out.wall_time_s;
  if (out.steps) {
    const char* prov[] = {"theorem", "practical", "learned"};
    j["steps"] = {{"tau", out.steps->tau},
                  {"sigma", out.steps->sigma},
                  {"provenance", prov[static_cast<int>(out.steps->provenance)]}};
  }

  const auto [ok, q] = CheckEpsTolerance(inst, MakePoint(inst, out.x, out.y),
                                         cfg.eps, cfg.f_star);
  j["quality"] = {{"eps_optimal", ok},
                  {"dist_v", q.dist_v},
                  {"dist_k", q.dist_k},
                  {"gap", q.gap},
                  {"cons_ok", q.cons_ok},
                  {"gap_ok", q.gap_ok}};
  if (q.e_obj) {
    j["quality"]["e_obj"] = *q.e_obj;
    j["quality"]["obj_ok"] = q.obj_ok;
  }

  if (problem.standard_form) {
    const StandardForm& sf = *problem.standard_form;
    j["x_original"] = VecToJson(MapToRaw(sf, out.x));
    j["original_columns"] = sf.raw_col_names;
  }
  for (const auto& [key, value] : out.extra.items()) j[key] = value;
  if (!out.warnings.empty()) j["warnings"] = out.warnings;
  return j;
}

void WriteTextFile(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << content;
  if (!f) throw InputError("write failed for '" + path + "'");
}

}  // namespace rpdhg::cli
