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

#ifndef RPDHG_SIMPLEX_H_
#define RPDHG_SIMPLEX_H_

#include <vector>

#include "Eigen/Core"
#include "rpdhg/linalg.h"

namespace rpdhg {

enum class DenseLpStatus { kOptimal, kInfeasible, kUnbounded, kPivotLimit };

struct DenseLpResult {
  DenseLpStatus status = DenseLpStatus::kInfeasible;
  Vec x;
  double objective = 0.0;
  std::vector<int> basis;
  int pivots = 0;
};

struct DenseLpOptions {
  double tol = 1e-11;
  int max_pivots = 100000;
};

// Two-phase tableau simplex with Bland's rule for
//   min c^T x  s.t.  A x = b,  x >= 0.
DenseLpResult SolveDenseLp(const Eigen::MatrixXd& a, const Vec& b,
                           const Vec& c, const DenseLpOptions& options = {});

}  // namespace rpdhg

#endif  // RPDHG_SIMPLEX_H_
