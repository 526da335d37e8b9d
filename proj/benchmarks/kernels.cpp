#include <benchmark/benchmark.h>

#include "ipm/experiments.hpp"
#include "ipm/interpolation.hpp"
#include "ipm/lagrangian.hpp"
#include "ipm/operators.hpp"
#include "ipm/spectral.hpp"
#include "ipm/transport.hpp"

using namespace ipm;

namespace {

RealField datum(int n) { return random_smooth_field(Grid::square(n), 11, n / 8); }

void BM_ForwardTransform(benchmark::State& state) {
  const RealField f = datum(int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(forward_transform(f));
  state.SetItemsProcessed(state.iterations() * f.data().size());
}

void BM_RoundTrip(benchmark::State& state) {
  const RealField f = datum(int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(inverse_transform(forward_transform(f)));
}

void BM_Darcy(benchmark::State& state) {
  const RealField f = datum(int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(darcy_velocity(f));
}

void BM_Advect(benchmark::State& state) {
  const RealField f = datum(int(state.range(0)));
  const VectorField u = darcy_velocity(f);
  for (auto _ : state) benchmark::DoNotOptimize(advect(u, f));
}

void BM_EulerianRhs(benchmark::State& state) {
  const RealField f = datum(int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rhs_eulerian(f));
}

void BM_SplineEvaluate(benchmark::State& state) {
  const RealField f = datum(int(state.range(0)));
  const CubicInterpolator interp(f);
  const double box = f.grid().box_length();
  double x = 0.0;
  for (auto _ : state) {
    x += 0.618033988749895;
    if (x >= box) x -= box;
    benchmark::DoNotOptimize(interp({x, box - x}));
  }
}

void BM_SplinePrefilter(benchmark::State& state) {
  const RealField f = datum(int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spline_coefficients(f));
}

// Ten RK4 steps of the density alone, then with the flow map attached.
void BM_DensitySteps(benchmark::State& state) {
  const RealField f = datum(int(state.range(0)));
  SolverConfig cfg;
  cfg.dt = 0.005;
  cfg.T = 0.05;
  for (auto _ : state) benchmark::DoNotOptimize(solve_density(f, cfg));
}

void BM_FlowSteps(benchmark::State& state) {
  const RealField f = datum(int(state.range(0)));
  SolverConfig cfg;
  cfg.dt = 0.005;
  cfg.T = 0.05;
  for (auto _ : state) benchmark::DoNotOptimize(solve_flow(f, cfg));
}

}  // namespace

BENCHMARK(BM_ForwardTransform)->Arg(64)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_RoundTrip)->Arg(128)->Arg(256);
BENCHMARK(BM_Darcy)->Arg(128)->Arg(256);
BENCHMARK(BM_Advect)->Arg(128)->Arg(256);
BENCHMARK(BM_EulerianRhs)->Arg(128)->Arg(256);
BENCHMARK(BM_SplineEvaluate)->Arg(256);
BENCHMARK(BM_SplinePrefilter)->Arg(128)->Arg(256);
BENCHMARK(BM_DensitySteps)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FlowSteps)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
