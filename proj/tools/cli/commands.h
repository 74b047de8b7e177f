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


#ifndef RPDHG_TOOLS_CLI_COMMANDS_H_
#define RPDHG_TOOLS_CLI_COMMANDS_H_

#include <optional>
#include <string>
#include <vector>

#include "pipeline.h"
#include "rpdhg/errors.h"
#include "rpdhg/geolab.h"

namespace rpdhg::cli {

struct SolveArgs {
  SolveConfig config;
  std::string input;
  std::string output;  // solution JSON, stdout when empty
  std::string trace;
  std::string state_out;
  std::string round_log;
  std::string rescaling_out;
};

struct AnalyzeArgs {
  std::string input;
  std::string output;  // report JSON, stdout when empty
  std::string sweep_csv;
  std::optional<double> delta;
  bool sweep = true;
  int per_decade = 40;
  ToleranceTriple eps;
  EnumerationLimits limits;
};

struct BenchArgs {
  std::string dir;
  std::vector<std::string> methods;
  std::string output;  // CSV, stdout when empty
  SolveConfig base;
  int ideal = 0;
  std::string ideal_csv;
};

int CmdSolve(const SolveArgs& args);
int CmdAnalyze(const AnalyzeArgs& args);
int CmdBench(const BenchArgs& args);

}  // namespace rpdhg::cli

#endif  // RPDHG_TOOLS_CLI_COMMANDS_H_
