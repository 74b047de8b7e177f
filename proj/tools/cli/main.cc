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


#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.h"

namespace {

using rpdhg::cli::SolveConfig;

void AddSolverOptions(CLI::App* cmd, SolveConfig& cfg) {
  cmd->add_option("--eps-rel", cfg.eps_rel, "Relative KKT error target")
      ->capture_default_str();
  cmd->add_option("--max-iters", cfg.max_iters, "PDHG iteration limit")
      ->capture_default_str();
  cmd->add_option("--time-limit", cfg.time_limit_s, "Time limit in seconds");
  cmd->add_flag("--deterministic", cfg.deterministic,
                "Replace time budgets by work-unit budgets");
  cmd->add_option("--target", cfg.target, "cp-cgm relative error target")
      ->capture_default_str();
  cmd->add_option("--ipm-time-limit", cfg.ipm_time_limit_s,
                  "Interior point budget for hessian:<delta>")
      ->capture_default_str();
  cmd->add_option("--t0", cfg.t0, "AHR initial interior point budget (s)")
      ->capture_default_str();
  cmd->add_option("--omega", cfg.omega, "AHR rPDHG/interior point time ratio")
      ->capture_default_str();
  cmd->add_flag("!--no-learn", cfg.learn, "Skip AHR step-size learning");
  cmd->add_option("--check-every", cfg.check_every, "Restart check cadence")
      ->capture_default_str();
  cmd->add_flag("--flexible,!--no-flexible", cfg.flexible,
                "Restart from the current or the averaged iterate");
  cmd->add_option("--seed", cfg.seed, "Seed for power-iteration starts")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Restarted PDHG for conic linear programs"};
  app.require_subcommand(1);

  rpdhg::cli::SolveArgs solve;
  CLI::App* s = app.add_subcommand("solve", "Solve one instance");
  s->add_option("input", solve.input, "MPS or instance JSON")->required();
  s->add_option("--method", solve.config.method, "rpdhg | rpdhg-ahr | cp-cgm")
      ->capture_default_str();
  s->add_option("--rescaling", solve.config.rescaling,
                "none | easy-column | ruiz-pc | hessian:<delta> | ahr")
      ->capture_default_str();
  s->add_option("--d2", solve.config.d2, "auto | identity | complete | ruiz-pc")
      ->capture_default_str();
  s->add_option("--steps", solve.config.steps, "practical | theorem | learned")
      ->capture_default_str();
  s->add_option("--eps-cons", solve.config.eps.eps_cons)->capture_default_str();
  s->add_option("--eps-gap", solve.config.eps.eps_gap)->capture_default_str();
  s->add_option("--eps-obj", solve.config.eps.eps_obj)->capture_default_str();
  s->add_option("--f-star", solve.config.f_star, "Known optimal value");
  AddSolverOptions(s, solve.config);
  s->add_option("-o,--output", solve.output, "Solution JSON (default stdout)");
  s->add_option("--trace", solve.trace, "Trace CSV");
  s->add_option("--state-out", solve.state_out, "cp-cgm state snapshot");
  s->add_option("--resume", solve.config.resume_state,
                "Continue cp-cgm from a snapshot");
  s->add_option("--round-log", solve.round_log, "AHR round log CSV");
  s->add_option("--rescaling-out", solve.rescaling_out, "Rescaling JSON");

  rpdhg::cli::AnalyzeArgs analyze;
  CLI::App* a = app.add_subcommand("analyze", "Sublevel-set geometry report");
  a->add_option("input", analyze.input, "MPS or instance JSON")->required();
  a->add_option("--delta", analyze.delta, "Evaluation gap (default delta_bar)");
  a->add_flag("!--no-sweep", analyze.sweep, "Skip the delta sweep");
  a->add_option("--per-decade", analyze.per_decade, "Sweep grid density")
      ->capture_default_str();
  a->add_option("--eps-cons", analyze.eps.eps_cons)->capture_default_str();
  a->add_option("--eps-gap", analyze.eps.eps_gap)->capture_default_str();
  a->add_option("--eps-obj", analyze.eps.eps_obj)->capture_default_str();
  a->add_option("--max-bases", analyze.limits.max_bases,
                "Vertex enumeration guard")
      ->capture_default_str();
  a->add_option("-o,--output", analyze.output, "Report JSON (default stdout)");
  a->add_option("--sweep-csv", analyze.sweep_csv, "Delta sweep CSV");

  rpdhg::cli::BenchArgs bench;
  bench.methods = {"rpdhg:ruiz-pc", "rpdhg-ahr"};
  CLI::App* b = app.add_subcommand("bench", "Compare methods on a directory");
  b->add_option("dir", bench.dir, "Directory of .mps/.json instances")
      ->required();
  b->add_option("--methods", bench.methods,
                "method[:rescaling][@d2], first one is the speedup baseline")
      ->delimiter(',')
      ->capture_default_str();
  AddSolverOptions(b, bench.base);
  b->add_option("--ideal", bench.ideal, "Ideal-sweep budget count (0 = off)");
  b->add_option("--ideal-csv", bench.ideal_csv, "Ideal-sweep CSV");
  b->add_option("-o,--output", bench.output, "Comparison CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (s->parsed()) return rpdhg::cli::CmdSolve(solve);
    if (a->parsed()) return rpdhg::cli::CmdAnalyze(analyze);
    return rpdhg::cli::CmdBench(bench);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
