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

#ifndef RPDHG_AHR_H_
#define RPDHG_AHR_H_

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rpdhg/ipm.h"
#include "rpdhg/model.h"
#include "rpdhg/pdhg.h"
#include "rpdhg/rescale.h"

namespace rpdhg {

struct AhrConfig {
  double t0 = 0.5;
  double omega = 6.0;
  double eps = 1e-8;
  // Defaults to sqrt(eps) and eps^(1/5).
  std::optional<double> eps_bar;
  std::optional<double> eps_hat;
  bool deterministic = false;
  double ops_per_second = kDeterministicOpsPerSecond;
  bool ruiz_pc = true;
  bool learn_steps = true;
  int64_t learn_iters = 10000;
  int max_rounds = 30;
  int64_t max_final_iters = 10000000;
  double time_limit_s = std::numeric_limits<double>::infinity();
  RestartOptions restart;
  // Test hook: replaces the measured eps_k of a round.
  std::function<double(int round, double measured)> eps_override;

  double EpsBar() const { return eps_bar.value_or(std::sqrt(eps)); }
  double EpsHat() const { return eps_hat.value_or(std::pow(eps, 0.2)); }
  void Validate() const;
};

enum class AhrDecision { kContinue, kAcceptNew, kRevert };
std::string AhrDecisionName(AhrDecision d);

struct AhrRound {
  int round = 0;  // 1-based
  double t = 0.0;
  double t_ipm_s = 0.0;  // cumulative CP-CGM time (or deterministic equivalent)
  double ipm_mu = 0.0;
  IpmStatus ipm_status = IpmStatus::kBudgetExhausted;
  double eta = 0.0;
  double eps_k = std::numeric_limits<double>::infinity();
  double eps_measured = std::numeric_limits<double>::infinity();
  AhrDecision decision = AhrDecision::kContinue;
  int64_t pdhg_iterations = 0;
  Vec warm_x;  // rPDHG start in the rescaled space
  Vec warm_y;
  Vec ipm_x;   // CP-CGM iterate behind the rescaling
  Vec ipm_y;
  Vec ipm_s;
};

enum class AhrExit { kAcceptNew, kRevert, kRoundLimit, kFallback };
std::string AhrExitName(AhrExit e);

struct AhrResult {
  SolveResult result;  // on the original instance
  std::vector<AhrRound> rounds;
  AhrExit exit = AhrExit::kAcceptNew;
  int fixed_round = 0;  // round whose rescaling was kept (0 for fallback)
  Rescaling rescaling;
  StepSizes steps;
  int64_t learn_iterations = 0;
  int64_t total_iterations = 0;  // every OnePDHG call, learning included
  double ipm_time_s = 0.0;
};

// rPDHG with adaptive Hessian rescaling. LP only; other cones, or a first
// CP-CGM round that stalls, fall back to a Ruiz/Pock-Chambolle rescaling.
AhrResult SolveAhr(const ClpInstance& inst, const AhrConfig& config = {});

// Header: round,t_ipm_s,ipm_mu,eps_k,decision
std::string RoundLogToCsv(const std::vector<AhrRound>& rounds);

struct IdealEntry {
  double budget_s = 0.0;
  double ipm_time_s = 0.0;
  double pdhg_time_s = 0.0;
  int64_t pdhg_iterations = 0;
  double relative_error = 0.0;
  bool solved = false;
  double total_s() const { return ipm_time_s + pdhg_time_s; }
};

struct IdealReport {
  std::string instance;
  std::vector<IdealEntry> entries;
  int best = -1;  // argmin of total time among solved entries
};

// Budgets t_i = 2^i / 4 for i = 1..count.
std::vector<double> IdealBudgets(int count);
IdealReport IdealSweep(const ClpInstance& inst, const AhrConfig& config,
                       const std::vector<double>& budgets);
std::string IdealReportToJson(const IdealReport& r);
IdealReport IdealReportFromJson(const std::string& text);

}  // namespace rpdhg

#endif  // RPDHG_AHR_H_
