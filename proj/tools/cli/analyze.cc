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


#include <cmath>
#include <iostream>

#include "commands.h"

namespace rpdhg::cli {

int CmdAnalyze(const AnalyzeArgs& args) {
  if (args.per_decade <= 0) throw InputError("--per-decade must be positive");
  if (args.delta && !(*args.delta > 0.0)) {
    throw InputError("--delta must be positive");
  }
  const Problem problem = LoadProblem(args.input);
  AnalyzeOptions opts;
  opts.eps = args.eps;
  opts.delta = args.delta;
  opts.sweep = args.sweep;
  opts.limits = args.limits;
  if (args.delta) {
    opts.sweep_deltas = {*args.delta};
  } else if (args.per_decade != 40) {
    const double anchor = BestSuboptimalGap(problem.instance, args.limits)
                              .delta_bar;
    if (std::isfinite(anchor)) {
      opts.sweep_deltas = DeltaGrid(anchor, args.per_decade);
    }
  }
  const GeometryReport report = Analyze(problem.instance, opts);

  const std::string json = GeometryReportToJson(report);
  if (args.output.empty()) {
    std::cout << json << "\n";
  } else {
    WriteTextFile(args.output, json + "\n");
  }
  if (!args.sweep_csv.empty()) {
    WriteTextFile(args.sweep_csv, SweepToCsv(report.sweep));
  }
  const GeometryPoint& g = report.at_delta;
  std::cerr << report.instance << ": delta_bar=" << report.delta_bar
            << "  delta=" << report.delta << "  D=" << g.diameter
            << "  r=" << g.radius << "  D/r=" << g.ratio()
            << "  dH=" << g.hausdorff << "  vertices=" << g.vertices << "\n";
  return 0;
}

}  // namespace rpdhg::cli
