#include <benchmark/benchmark.h>

#include <cmath>

#include "choreo/dynamics.hpp"
#include "choreo/minimizer.hpp"

using namespace choreo;

namespace {

SymmetricLoop unit_seed(int modes) {
  const auto seed = SymmetricLoop::seed(modes);
  return seed.scaled(1.0 / std::sqrt(kinetic(seed, ProblemParams{})));
}

void BM_Evaluate(benchmark::State& state) {
  const int modes = static_cast<int>(state.range(0));
  ProblemParams params;
  params.quad_nodes = static_cast<int>(state.range(1));
  const ChoreographyModel model(params, modes);
  const auto loop = unit_seed(modes);
  for (auto _ : state) benchmark::DoNotOptimize(model.evaluate(loop));
}
BENCHMARK(BM_Evaluate)->Args({12, 512})->Args({24, 512})->Args({24, 1024});

void BM_Potential(benchmark::State& state) {
  const ChoreographyModel model(ProblemParams{}, 24);
  const auto loop = unit_seed(24);
  for (auto _ : state) benchmark::DoNotOptimize(model.potential(loop));
}
BENCHMARK(BM_Potential);

void BM_Gradients(benchmark::State& state) {
  const ChoreographyModel model(ProblemParams{}, 24);
  const auto loop = unit_seed(24);
  for (auto _ : state) benchmark::DoNotOptimize(model.gradients(loop));
}
BENCHMARK(BM_Gradients);

void BM_SolverStep(benchmark::State& state) {
  SolverConfig config;
  config.modes = 24;
  const Minimizer solver(ProblemParams{}, config);
  const auto start = solver.start(unit_seed(24));
  for (auto _ : state) {
    auto s = start;
    solver.step(s);
    benchmark::DoNotOptimize(s.report.F);
  }
}
BENCHMARK(BM_SolverStep);

void BM_Solve(benchmark::State& state) {
  SolverConfig config;
  config.modes = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve(ProblemParams{}, config).report.F);
}
BENCHMARK(BM_Solve)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_Rk4Period(benchmark::State& state) {
  SolverConfig config;
  config.modes = 16;
  const auto solved = solve(ProblemParams{}, config);
  const double rho = virial_multiplier(solved.report, 1.0);
  const auto orbit = rescale_time(solved.loop, rho);
  const NBodySystem system{1.0, 1.0, 1e-6};
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_newton(orbit.initial_state(), system, orbit.period, steps).closure_error);
  }
  state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_Rk4Period)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
