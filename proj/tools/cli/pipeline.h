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


#ifndef RPDHG_TOOLS_CLI_PIPELINE_H_
#define RPDHG_TOOLS_CLI_PIPELINE_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rpdhg/ahr.h"
#include "rpdhg/ipm.h"
#include "rpdhg/model.h"
#include "rpdhg/pdhg.h"
#include "rpdhg/rescale.h"

namespace rpdhg::cli {

// An input file in standard form, with the back-map when it came from MPS.
struct Problem {
  ClpInstance instance;
  std::optional<StandardForm> standard_form;
};

Problem LoadProblem(const std::string& path);

struct SolveConfig {
  std::string method = "rpdhg";     // rpdhg | rpdhg-ahr | cp-cgm
  std::string rescaling = "none";   // none | easy-column | ruiz-pc | hessian:<d> | ahr
  std::string d2 = "auto";          // auto | identity | complete | ruiz-pc
  std::string steps = "practical";  // practical | theorem | learned
  double eps_rel = 1e-8;
  ToleranceTriple eps;
  std::optional<double> f_star;
  int64_t max_iters = 10000000;
  double time_limit_s = std::numeric_limits<double>::infinity();
  bool deterministic = false;
  double target = 1e-8;          // cp-cgm
  double ipm_time_limit_s = 60;  // hessian:<d>
  double t0 = 0.5;               // rpdhg-ahr
  double omega = 6.0;
  bool learn = true;
  int check_every = 64;
  bool flexible = true;
  uint64_t seed = 20240601;
  std::string resume_state;  // cp-cgm snapshot to continue from
};

// Throws InputError on inconsistent method/rescaling/d2 combinations.
void ValidateSolveConfig(const SolveConfig& cfg);

// Parses "<method>[:<rescaling>][@<d2>]", e.g. "rpdhg:hessian:0.1@complete".
SolveConfig ParseMethodSpec(const std::string& spec, SolveConfig base);

struct SolveOutcome {
  std::string status;
  int exit_code = 1;  // 0 optimal, 2 limit
  Vec x;
  Vec y;
  Vec s;
  int64_t iterations = 0;
  int restarts = 0;
  int64_t matvecs = 0;
  double wall_time_s = 0.0;
  double e_r = 0.0;
  std::vector<TraceRow> trace;
  std::optional<Rescaling> rescaling;
  std::optional<StepSizes> steps;
  std::optional<IpmState> ipm_state;
  std::vector<AhrRound> rounds;
  nlohmann::json extra = nlohmann::json::object();
  std::vector<std::string> warnings;
};

SolveOutcome RunSolve(const ClpInstance& inst, const SolveConfig& cfg);

nlohmann::json SolutionJson(const Problem& problem, const SolveConfig& cfg,
                            const SolveOutcome& out);

nlohmann::json VecToJson(const Vec& v);
void WriteTextFile(const std::string& path, const std::string& content);

}  // namespace rpdhg::cli

#endif  // RPDHG_TOOLS_CLI_PIPELINE_H_
