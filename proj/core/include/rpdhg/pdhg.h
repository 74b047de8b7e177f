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

#ifndef RPDHG_PDHG_H_
#define RPDHG_PDHG_H_

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "rpdhg/linalg.h"
#include "rpdhg/model.h"

namespace rpdhg {

enum class StepProvenance { kTheorem, kPractical, kLearned };

struct StepSizes {
  double tau = 1.0;
  double sigma = 1.0;
  StepProvenance provenance = StepProvenance::kPractical;
};

struct PdhgPoint {
  Vec x;
  Vec y;
};

// One PDHG step: x+ = P_K(x - tau (c - A^T y)), y+ = y + sigma (b - A(2x+ - x)).
PdhgPoint OnePdhg(const ClpInstance& inst, const Vec& x, const Vec& y,
                  const StepSizes& steps);

// tau = 1/kappa, sigma = 1/(lambda_max lambda_min). Falls back to
// PracticalStepSizes when lambda_min is unavailable.
StepSizes DefaultStepSizes(const ClpInstance& inst);
// tau = sigma = factor / lambda_max.
StepSizes PracticalStepSizes(double lambda_max, double factor = 0.8);
// (10^l / (2 lambda_max), 10^-l / (2 lambda_max)) for l = -2..2.
std::vector<StepSizes> LearnedStepPairs(double lambda_max);

struct RestartOptions {
  double beta = std::exp(-1.0);
  // Restart from whichever of {current, average} meets the condition.
  bool flexible = false;
  // Restart checks at inner iterations k that are multiples of check_every,
  // plus powers of two below it.
  int check_every = 64;
};

// Returns a scalar error; the run stops once it is <= StopRule::eps.
using ErrorFn = std::function<double(const Vec& x, const Vec& y)>;

struct StopRule {
  double eps = 1e-8;
  int64_t max_iters = 1000000;
  double time_limit_s = std::numeric_limits<double>::infinity();
  // Defaults to the relative error of the instance being solved.
  ErrorFn error;
  // Test only restart anchors z^{n,0} instead of every check point.
  bool anchors_only = false;
};

struct TraceRow {
  int64_t iter = 0;
  int outer = 0;
  double e_r = 0.0;
  double rho = 0.0;
  bool restarted = false;
  double wall_time_s = 0.0;
};

enum class SolveStatus { kOptimal, kIterationLimit, kTimeLimit };
std::string StatusName(SolveStatus status);

struct SolveResult {
  Vec x;
  Vec y;
  Vec s;
  SolveStatus status = SolveStatus::kIterationLimit;
  int64_t iterations = 0;
  int restarts = 0;
  int64_t matvecs = 0;
  double error = 0.0;           // value of the stop-rule error at exit
  double relative_error = 0.0;  // E_r of (x, y) on the solved instance
  double wall_time_s = 0.0;
  std::vector<TraceRow> trace;
  std::vector<double> restart_rhos;
};

// Called with (x, y) before and (x+, y+) after each PDHG step.
using StepObserver = std::function<void(const Vec& x, const Vec& y,
                                        const Vec& x_next, const Vec& y_next)>;

struct SolveOptions {
  RestartOptions restart;
  StopRule stop;
  Vec x0;  // empty means zero
  Vec y0;
  StepObserver on_step;
  bool record_trace = true;
};

// Restarted PDHG with the beta-restart condition evaluated on rho_N. Throws
// NumericalError on non-finite or diverging iterates.
SolveResult SolveRpdhg(const ClpInstance& inst, const StepSizes& steps,
                       const SolveOptions& options = {});

std::string TraceToCsv(const std::vector<TraceRow>& trace);

struct LearnedSelection {
  StepSizes chosen;
  int chosen_index = 2;        // index into LearnedStepPairs
  std::vector<double> errors;  // final error per pair, same order as pairs
  int64_t iterations = 0;      // total iterations spent on the sweep
};

// Runs each learned pair for `iters` iterations from the same start and
// keeps the one with the smallest final error.
LearnedSelection SelectLearnedSteps(const ClpInstance& inst,
                                    double lambda_max,
                                    const SolveOptions& base,
                                    int64_t iters = 10000);

struct SublinearReport {
  std::vector<double> rho;       // rho_M at each k = 1..K
  std::vector<double> envelope;  // 8 Dist_M(z0, Z*) / k
  double dist_m = 0.0;
  double worst_ratio = 0.0;      // max rho / envelope
  bool holds = true;
};

// Plain PDHG from z0 for `iters` steps, comparing rho_M at each inner
// average with 8 Dist_M(z0, Z*)/k. `saddle_points` holds the vertices of
// Z* as columns (x stacked over y). Desk scale only.
SublinearReport SublinearCheck(const ClpInstance& inst, const StepSizes& steps,
                               const Vec& x0, const Vec& y0,
                               const Eigen::MatrixXd& saddle_points,
                               int iters);

// Dist_M from z to conv(columns of saddle_points), M positive definite.
double DistMToHull(const ClpInstance& inst, const StepSizes& steps,
                   const Vec& z, const Eigen::MatrixXd& saddle_points);

}  // namespace rpdhg

#endif  // RPDHG_PDHG_H_
