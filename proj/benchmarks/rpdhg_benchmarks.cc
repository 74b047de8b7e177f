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


#include <cstdint>
#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "rpdhg/cones.h"
#include "rpdhg/geolab.h"
#include "rpdhg/ipm.h"
#include "rpdhg/linalg.h"
#include "rpdhg/model.h"
#include "rpdhg/pdhg.h"
#include "rpdhg/rescale.h"

namespace rpdhg {
namespace {

// Feasible bounded LP with about `per_row` nonzeros per row.
ClpInstance SparseLp(int m, int n, int per_row, uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> col(0, n - 1);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.5, 1.5);
  std::vector<Triplet> t;
  for (int i = 0; i < m; ++i) {
    t.push_back({i, i % n, 1.0});
    for (int k = 0; k < per_row; ++k) t.push_back({i, col(gen), val(gen)});
  }
  SparseMatrix a = SparseMatrix::FromTriplets(m, n, std::move(t));
  Vec x0(n), s0(n), y0(m);
  for (int j = 0; j < n; ++j) x0[j] = pos(gen);
  for (int j = 0; j < n; ++j) s0[j] = pos(gen);
  for (int i = 0; i < m; ++i) y0[i] = val(gen);
  const Vec b = Spmv(a, x0);
  const Vec c = SpmvT(a, y0) + s0;
  return MakeInstance("sparse", std::move(a), b, c, ConeSpec::NonNeg(n));
}

ClpInstance Pnu(double nu) {
  Eigen::MatrixXd a(1, 3);
  a << -10.0, 1.0, 1.0;
  Vec b(1);
  b << 1.0;
  Vec c(3);
  c << (2.0 + nu) / 10.0, 1.0, 1.0 + nu;
  return MakeInstance("p_nu", SparseMatrix::FromDense(a), b, c,
                      ConeSpec::NonNeg(3));
}

void BM_Spmv(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ClpInstance inst = SparseLp(n / 2, n, 8, 1);
  Vec out(inst.m());
  const Vec x = Vec::Ones(n);
  for (auto _ : state) {
    Spmv(inst.a, x, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * inst.a.nnz());
}
BENCHMARK(BM_Spmv)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 17);

void BM_SpmvT(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ClpInstance inst = SparseLp(n / 2, n, 8, 1);
  Vec out(n);
  const Vec y = Vec::Ones(inst.m());
  for (auto _ : state) {
    SpmvT(inst.a, y, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * inst.a.nnz());
}
BENCHMARK(BM_SpmvT)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 17);

void BM_ProjectSecondOrder(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const ConeSpec k(std::vector<ConeBlock>(64, {ConeType::kSecondOrder, d}));
  std::mt19937_64 gen(3);
  std::normal_distribution<double> nd;
  Vec v(k.dim());
  for (int i = 0; i < v.size(); ++i) v[i] = nd(gen);
  for (auto _ : state) {
    Vec w = v;
    ProjectInPlace(k, w);
    benchmark::DoNotOptimize(w.data());
  }
}
BENCHMARK(BM_ProjectSecondOrder)->Arg(3)->Arg(64);

void BM_OnePdhg(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ClpInstance inst = WithCaches(SparseLp(n / 2, n, 8, 2));
  const StepSizes steps = PracticalStepSizes(inst.spectra->lambda_max);
  PdhgPoint z{Vec::Zero(n), Vec::Zero(inst.m())};
  for (auto _ : state) {
    z = OnePdhg(inst, z.x, z.y, steps);
    benchmark::DoNotOptimize(z.x.data());
  }
}
BENCHMARK(BM_OnePdhg)->Arg(1 << 10)->Arg(1 << 14);

void BM_EstimateSpectra(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ClpInstance inst = SparseLp(n / 2, n, 8, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(EstimateSpectra(inst.a).lambda_max);
  }
}
BENCHMARK(BM_EstimateSpectra)->Arg(256)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_SolveNormalEquations(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ClpInstance inst = SparseLp(n / 2, n, 8, 5);
  const Vec w = Vec::Ones(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(SolveNormalEquations(inst.a, inst.b, w).x.data());
  }
}
BENCHMARK(BM_SolveNormalEquations)->Arg(1024)->Arg(8192)
    ->Unit(benchmark::kMillisecond);

void BM_SolveRpdhgPnu(benchmark::State& state) {
  const ClpInstance inst = WithCaches(Pnu(1e-4));
  const Rescaling r = WithRuizPc(inst, IdentityRescaling(inst));
  SolveOptions opts;
  opts.record_trace = false;
  int64_t iters = 0;
  for (auto _ : state) {
    const RescaledSolve rs = SolveRescaled(inst, r, opts);
    iters = rs.result.iterations;
    benchmark::DoNotOptimize(rs.result.x.data());
  }
  state.counters["pdhg_iterations"] = static_cast<double>(iters);
}
BENCHMARK(BM_SolveRpdhgPnu)->Unit(benchmark::kMillisecond);

void BM_SolveRpdhgSparse(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ClpInstance inst = WithCaches(SparseLp(n / 2, n, 4, 6));
  const Rescaling r = WithRuizPc(inst, IdentityRescaling(inst));
  SolveOptions opts;
  opts.record_trace = false;
  opts.stop.eps = 1e-4;
  opts.stop.max_iters = 200000;
  int64_t iters = 0;
  for (auto _ : state) {
    const RescaledSolve rs = SolveRescaled(inst, r, opts);
    iters = rs.result.iterations;
    benchmark::DoNotOptimize(rs.result.x.data());
  }
  state.counters["pdhg_iterations"] = static_cast<double>(iters);
}
BENCHMARK(BM_SolveRpdhgSparse)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_CpCgm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ClpInstance inst = SparseLp(n / 2, n, 4, 7);
  IpmBudget budget;
  budget.deterministic = true;
  budget.target_rel_error = 1e-2;
  budget.time_limit_s = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(CpCgm(inst, budget).iterate.x.data());
  }
}
BENCHMARK(BM_CpCgm)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_AnalyzePnu(benchmark::State& state) {
  const ClpInstance inst = Pnu(0.0);
  AnalyzeOptions opts;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Analyze(inst, opts).at_delta.diameter);
  }
}
BENCHMARK(BM_AnalyzePnu)->Unit(benchmark::kMillisecond);

void BM_EnumerateVertices(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  const int m = n / 2;
  Eigen::MatrixXd a(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = u(gen);
  }
  const Vec b = a * Vec::Ones(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(EnumerateVertices(a, b).size());
  }
}
BENCHMARK(BM_EnumerateVertices)->Arg(8)->Arg(14)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace rpdhg

BENCHMARK_MAIN();
