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

#ifndef RPDHG_IPM_H_
#define RPDHG_IPM_H_

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rpdhg/linalg.h"
#include "rpdhg/model.h"

namespace rpdhg {

// Work units per second used to turn time budgets into deterministic
// budgets. One unit is one floating point multiply-add of a matrix-vector
// product or a vector update.
inline constexpr double kDeterministicOpsPerSecond = 2.0e8;

struct IpmBudget {
  double time_limit_s = std::numeric_limits<double>::infinity();
  // Stop at the first iterate with E_r <= target on the original problem.
  double target_rel_error = 1e-8;
  // Counts work units instead of reading the clock.
  bool deterministic = false;
  int max_outer = 500;
};

struct IpmIterate {
  Vec x;
  Vec y;
  Vec s;
  double mu = 0.0;
  double relative_error = 0.0;
  int outer = 0;
  double wall_time_s = 0.0;
};

enum class IpmStatus { kTargetReached, kBudgetExhausted, kStalled, kNumerical };
std::string IpmStatusName(IpmStatus status);

// Resumable state; iterates live in the Ruiz-scaled space.
struct IpmState {
  bool initialized = false;
  Vec x;
  Vec y;
  Vec s;
  int outer = 0;
  double best_mu = std::numeric_limits<double>::infinity();
  int stall = 0;
  double ops = 0.0;          // work units consumed so far
  double ops_budget = 0.0;   // cumulative deterministic budget
  double wall_time_s = 0.0;  // cumulative
  std::vector<double> mu_history;
  std::vector<int> cg_iterations;  // per normal-equation solve
};

std::string IpmStateToJson(const IpmState& state);
IpmState IpmStateFromJson(const std::string& text);

struct IpmResult {
  IpmIterate iterate;
  IpmState state;
  IpmStatus status = IpmStatus::kBudgetExhausted;
};

// Mehrotra predictor-corrector with Jacobi-preconditioned CG on the normal
// equations, on a 10-pass Ruiz scaling of the instance. Passing a state
// continues from it, with the budget added on top of the time already used.
// Throws UnsupportedError for non-orthant cones.
IpmResult CpCgm(const ClpInstance& inst, const IpmBudget& budget,
                const IpmState* resume = nullptr);

// First iterate with E_r <= delta.
IpmResult InteriorPointAtGap(const ClpInstance& inst, double delta,
                             IpmBudget budget = {});

}  // namespace rpdhg

#endif  // RPDHG_IPM_H_
