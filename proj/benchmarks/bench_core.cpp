#include <benchmark/benchmark.h>

#include "ptspec/ptspec.hpp"

using namespace ptspec;

namespace {

const Drive kQuadratic = Drive::polynomial({0.0, 0.0, 1.0});

void BM_HermiteEval(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const complex z{0.7, 0.4};
  for (auto _ : state) benchmark::DoNotOptimize(hermite_eval(n, z));
}
BENCHMARK(BM_HermiteEval)->Arg(0)->Arg(3)->Arg(16)->Arg(64);

void BM_PsiSample(benchmark::State& state) {
  const auto s = ClosedFormState::analytic(static_cast<int>(state.range(0)), kQuadratic);
  const SpatialGrid grid = SpatialGrid::symmetric(12.0, 2401);
  for (auto _ : state) benchmark::DoNotOptimize(psi_sample(s, grid, 1.0));
  state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(BM_PsiSample)->Arg(0)->Arg(3);

void BM_EnergyQuadrature(benchmark::State& state) {
  const auto s = ClosedFormState::analytic(1, kQuadratic);
  const GridState st = psi_sample(s, SpatialGrid::symmetric(12.0, 2401), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(energy_quadrature(st, kQuadratic));
}
BENCHMARK(BM_EnergyQuadrature);

// 100 Crank-Nicolson steps on the default grid.
void BM_CrankNicolson(benchmark::State& state) {
  const auto s = ClosedFormState::analytic(0, kQuadratic);
  const SpatialGrid grid = SpatialGrid::symmetric(12.0, static_cast<int>(state.range(0)));
  const GridState start = psi_sample(s, grid, 0.0);
  const PropagationConfig cfg{grid, 1e-4, 0.0, 1e-2, drive_potential(kQuadratic)};
  for (auto _ : state) benchmark::DoNotOptimize(crank_nicolson_propagate(start, cfg));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_CrankNicolson)->Arg(2401)->Arg(4801)->Unit(benchmark::kMillisecond);

void BM_ShiftRk4(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(solve_shift_numeric(kQuadratic, 0.0, 1.0, {-0.5, 0.0}));
}
BENCHMARK(BM_ShiftRk4)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
