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


#include <iostream>

#include "commands.h"
#include "rpdhg/ipm.h"

namespace rpdhg::cli {

int CmdSolve(const SolveArgs& args) {
  ValidateSolveConfig(args.config);
  if (!args.round_log.empty() && args.config.method != "rpdhg-ahr") {
    throw InputError("--round-log applies to rpdhg-ahr only");
  }
  if (!args.state_out.empty() && args.config.method != "cp-cgm") {
    throw InputError("--state-out applies to cp-cgm only");
  }
  const Problem problem = LoadProblem(args.input);
  const SolveOutcome out = RunSolve(problem.instance, args.config);
  for (const std::string& w : out.warnings) {
    std::cerr << "warning: " << w << "\n";
  }

  const std::string solution = SolutionJson(problem, args.config, out).dump(2);
  if (args.output.empty()) {
    std::cout << solution << "\n";
  } else {
    WriteTextFile(args.output, solution + "\n");
  }
  if (!args.trace.empty()) WriteTextFile(args.trace, TraceToCsv(out.trace));
  if (!args.state_out.empty()) {
    WriteTextFile(args.state_out, IpmStateToJson(*out.ipm_state));
  }
  if (!args.round_log.empty()) {
    WriteTextFile(args.round_log, RoundLogToCsv(out.rounds));
  }
  if (!args.rescaling_out.empty()) {
    if (!out.rescaling) throw InputError("no rescaling for this method");
    WriteTextFile(args.rescaling_out, RescalingToJson(*out.rescaling));
  }
  std::cerr << problem.instance.name << ": " << out.status
            << "  E_r=" << out.e_r << "  iterations=" << out.iterations
            << "  wall=" << out.wall_time_s << "s\n";
  return out.exit_code;
}

}  // namespace rpdhg::cli
