#include <benchmark/benchmark.h>

#include "hcboson/fluctuations.hpp"
#include "hcboson/lattice_oracle.hpp"
#include "hcboson/mean_field.hpp"

namespace {

using namespace hcb;

ModelParams at(double U, double beta) { return ModelParams(-1.0, U, InverseTemperature::finite(beta)); }

void BM_SolveGap(benchmark::State& state) {
  const auto p = at(0.25, 4.0);
  GapSolverOptions options;
  options.grid_points = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_gap(p, options));
}
BENCHMARK(BM_SolveGap)->Arg(256)->Arg(2048)->Arg(16384);

void BM_DiagonalizeClosedForm(benchmark::State& state) {
  const auto p = at(0.25, 4.0);
  for (auto _ : state) benchmark::DoNotOptimize(diagonalize_h(p, Complex(0.3, 0.1)));
}
BENCHMARK(BM_DiagonalizeClosedForm);

void BM_DiagonalizeNumeric(benchmark::State& state) {
  const auto p = at(0.25, 4.0);
  for (auto _ : state) benchmark::DoNotOptimize(diagonalize_h(p, Complex(0.3, 0.1), EigenbasisMode::numeric));
}
BENCHMARK(BM_DiagonalizeNumeric);

void BM_FluctuationAnalysis(benchmark::State& state) {
  const auto p = at(0.25, 4.0);
  const double lam = solve_gap(p).lambda_mod;
  for (auto _ : state) {
    const auto a = analyze_fluctuations(p, lam);
    benchmark::DoNotOptimize(independence_matrix(a.pairs, a.rho));
  }
}
BENCHMARK(BM_FluctuationAnalysis);

void BM_LatticeObserve(benchmark::State& state) {
  const LatticeSpec spec{static_cast<int>(state.range(0)), at(0.25, 4.0)};
  for (auto _ : state) benchmark::DoNotOptimize(observe(spec));
}
BENCHMARK(BM_LatticeObserve)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
