// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <numbers>

#include "wharray/config.hpp"
#include "wharray/reference.hpp"

using namespace wharray;

namespace
{

constexpr double pi = std::numbers::pi;

ProblemSpec preset(const char *name, int n)
{
  ProblemSpec p = preset_config(name).problem;
  p.n_trunc = n;
  return p;
}

void BM_KernelEval(benchmark::State &state)
{
  const KernelData kd = factorize(5 * pi, 0.1, 0.001, 4096, 10);
  double psi = 0.1;
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(kernel_eval_angle(kd, psi));
    psi += 1e-3;
    if (psi > 1.4)
      psi = 0.1;
  }
}
BENCHMARK(BM_KernelEval);

void BM_Factorize(benchmark::State &state)
{
  const int n = int(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(factorize(5 * pi, 0.1, 0.001, 4096, n));
}
BENCHMARK(BM_Factorize)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SolveWedge(benchmark::State &state)
{
  const ProblemSpec p = preset("wedge", int(state.range(0)));
  SolverOptions opt;
  opt.compute_residuals = false;
  for (auto _ : state)
    benchmark::DoNotOptimize(solve(p, opt));
}
BENCHMARK(BM_SolveWedge)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_DirectFoldyWedge(benchmark::State &state)
{
  const ProblemSpec p = preset("wedge", int(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(direct_foldy_solve(p));
}
BENCHMARK(BM_DirectFoldyWedge)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_LscWedge(benchmark::State &state)
{
  const ProblemSpec p = preset("wedge", int(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(lsc_solve(p, 8));
}
BENCHMARK(BM_LscWedge)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_FieldGrid(benchmark::State &state)
{
  const RunConfig c = preset_config("wedge");
  ProblemSpec p = c.problem;
  p.n_trunc = 100;
  SolverOptions opt;
  opt.compute_residuals = false;
  const ScatteringSolution sol = solve(p, opt).solution;
  GridSpec g = c.grid;
  g.nx = g.ny = int(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(total_field(p, sol, g));
}
BENCHMARK(BM_FieldGrid)->Arg(51)->Arg(101)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
