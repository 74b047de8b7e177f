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


#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include "commands.h"
#include "rpdhg/ahr.h"

namespace rpdhg::cli {
namespace {

namespace fs = std::filesystem;

constexpr double kSolvedThreshold = 1e-8;

struct BenchRow {
  std::string instance;
  std::string method;
  std::string status = "error";
  bool solved = false;
  int64_t iterations = 0;
  int64_t matvecs = 0;
  double wall_time_s = 0.0;
  double e_r = 0.0;
  std::string error;
};

struct InstanceWork {
  std::string name;
  std::string path;
  std::vector<BenchRow> rows;
  std::optional<IdealReport> ideal;
  std::string ideal_error;
};

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

int WorkerCount(size_t jobs) {
  int workers = 1;
  if (const char* env = std::getenv("RPDHG_BENCH_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
      throw InputError("RPDHG_BENCH_WORKERS must be a positive integer");
    }
    workers = static_cast<int>(v);
  }
  return static_cast<int>(std::min<size_t>(workers, std::max<size_t>(jobs, 1)));
}

std::vector<InstanceWork> ListInstances(const std::string& dir) {
  if (!fs::is_directory(dir)) throw InputError("not a directory: '" + dir + "'");
  std::vector<InstanceWork> work;
  for (const fs::directory_entry& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext != ".mps" && ext != ".json") continue;
    work.push_back({e.path().filename().string(), e.path().string(), {}, {}, {}});
  }
  std::sort(work.begin(), work.end(),
            [](const InstanceWork& a, const InstanceWork& b) {
              return a.name < b.name;
            });
  return work;
}

void RunInstance(InstanceWork& w, const std::vector<std::string>& specs,
                 const std::vector<SolveConfig>& configs, const BenchArgs& args) {
  std::optional<Problem> problem;
  std::string load_error;
  try {
    problem = LoadProblem(w.path);
  } catch (const std::exception& e) {
    load_error = e.what();
  }
  for (size_t k = 0; k < configs.size(); ++k) {
    BenchRow row;
    row.instance = w.name;
    row.method = specs[k];
    if (!problem) {
      row.error = load_error;
    } else {
      try {
        const SolveOutcome out = RunSolve(problem->instance, configs[k]);
        row.status = out.status;
        row.e_r = out.e_r;
        row.solved = out.e_r <= kSolvedThreshold;
        row.iterations = out.iterations;
        row.matvecs = out.matvecs;
        row.wall_time_s = out.wall_time_s;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
    w.rows.push_back(row);
  }
  if (args.ideal > 0 && !problem) w.ideal_error = load_error;
  if (args.ideal > 0 && problem) {
    try {
      AhrConfig ac;
      ac.eps = args.base.eps_rel;
      ac.omega = args.base.omega;
      ac.deterministic = args.base.deterministic;
      ac.learn_steps = args.base.learn;
      ac.max_final_iters = args.base.max_iters;
      w.ideal = IdealSweep(WithCaches(problem->instance), ac,
                           IdealBudgets(args.ideal));
    } catch (const std::exception& e) {
      w.ideal_error = e.what();
    }
  }
}

std::string BenchCsv(const std::vector<InstanceWork>& work) {
  std::ostringstream os;
  os << "instance,method,status,solved,iterations,matvecs,wall_time_s,E_r,"
        "speedup,error\n";
  for (const InstanceWork& w : work) {
    const BenchRow& base = w.rows.front();
    for (const BenchRow& r : w.rows) {
      std::string speedup;
      if (base.error.empty() && r.error.empty() && base.matvecs > 0 &&
          r.matvecs > 0) {
        speedup = Num(static_cast<double>(base.matvecs) /
                      static_cast<double>(r.matvecs));
      }
      os << CsvField(r.instance) << ',' << CsvField(r.method) << ','
         << r.status << ',' << (r.solved ? 1 : 0) << ',' << r.iterations << ','
         << r.matvecs << ',' << Num(r.wall_time_s) << ','
         << (r.error.empty() ? Num(r.e_r) : "") << ',' << speedup << ','
         << CsvField(r.error) << '\n';
    }
  }
  return os.str();
}

std::string IdealCsv(const std::vector<InstanceWork>& work) {
  std::ostringstream os;
  os << "instance,budget_s,ipm_time_s,pdhg_time_s,total_s,pdhg_iterations,"
        "E_r,solved,best,error\n";
  for (const InstanceWork& w : work) {
    if (!w.ideal) {
      os << CsvField(w.name) << ",,,,,,,,," << CsvField(w.ideal_error) << '\n';
      continue;
    }
    const IdealReport& r = *w.ideal;
    for (size_t i = 0; i < r.entries.size(); ++i) {
      const IdealEntry& e = r.entries[i];
      os << CsvField(w.name) << ',' << Num(e.budget_s) << ','
         << Num(e.ipm_time_s) << ',' << Num(e.pdhg_time_s) << ','
         << Num(e.total_s()) << ',' << e.pdhg_iterations << ','
         << Num(e.relative_error) << ',' << (e.solved ? 1 : 0) << ','
         << (static_cast<int>(i) == r.best ? 1 : 0) << ",\n";
    }
  }
  return os.str();
}

}  // namespace

int CmdBench(const BenchArgs& args) {
  if (args.methods.empty()) throw InputError("--methods needs at least one entry");
  if (args.ideal < 0) throw InputError("--ideal must be non-negative");
  if (args.ideal > 0 && args.ideal_csv.empty()) {
    throw InputError("--ideal needs --ideal-csv");
  }
  std::vector<SolveConfig> configs;
  for (const std::string& spec : args.methods) {
    configs.push_back(ParseMethodSpec(spec, args.base));
  }
  std::vector<InstanceWork> work = ListInstances(args.dir);
  if (work.empty()) {
    std::cerr << "warning: no .mps or .json instances in '" << args.dir
              << "'\n";
  }

  const int workers = WorkerCount(work.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < work.size(); i = next++) {
      RunInstance(work[i], args.methods, configs, args);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  const std::string csv = BenchCsv(work);
  if (args.output.empty()) {
    std::cout << csv;
  } else {
    WriteTextFile(args.output, csv);
  }
  if (args.ideal > 0) WriteTextFile(args.ideal_csv, IdealCsv(work));
  for (const InstanceWork& w : work) {
    for (const BenchRow& r : w.rows) {
      if (!r.error.empty()) {
        std::cerr << "warning: " << r.instance << " / " << r.method << ": "
                  << r.error << "\n";
      }
    }
  }
  return 0;
}

}  // namespace rpdhg::cli
