// Serial reference kernels against their OpenMP counterparts. Arg(0) is serial, Arg(1) parallel.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "qfoundry/hvmodels.hpp"
#include "qfoundry/inequalities.hpp"
#include "qfoundry/popper.hpp"

using namespace qfoundry;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::Parallel : Exec::Serial; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "omp" : "serial"); }

void BM_LeggettSampler(benchmark::State& state) {
  const auto params = hv::leggett_grid_scenarios(97)[3];
  for (auto _ : state) {
    const auto sums = state.range(0) ? hv::sample_leggett_omp(params, 1000000, 7)
                                     : hv::sample_leggett_serial(params, 1000000, 7);
    benchmark::DoNotOptimize(sums);
  }
  state.SetItemsProcessed(state.iterations() * 1000000);
  label(state);
}
BENCHMARK(BM_LeggettSampler)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RandomTrials(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ineq::random_quantum_trials(10000, 7, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * 10000);
  label(state);
}
BENCHMARK(BM_RandomTrials)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_LeggettScan(benchmark::State& state) {
  const double deg = std::numbers::pi / 180.0;
  const auto phis = ineq::make_grid(0.0, 180.0 * deg, 0.001 * deg);
  for (auto _ : state) benchmark::DoNotOptimize(ineq::leggett_violation_scan(phis, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(phis.size()));
  label(state);
}
BENCHMARK(BM_LeggettScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PopperAmplitude(benchmark::State& state) {
  const popper::GaussianPairState pair{2.0, 0.25};
  const popper::SlitCondition slit{0.0, 0.5, popper::SlitProfile::Hard};
  const popper::GridSpec spec{64, 8.0};
  const auto grid = popper::make_grid(pair, &slit, spec);
  const auto q = popper::slit_quadrature(pair, slit, grid, spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(state.range(0) ? popper::conditional_amplitude_omp(pair, slit, grid, q)
                                            : popper::conditional_amplitude_serial(pair, slit, grid, q));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.n * q.nodes.size()));
  label(state);
}
BENCHMARK(BM_PopperAmplitude)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ChshOptimize(benchmark::State& state) {
  ineq::ChshOptions opt;
  opt.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(ineq::chsh_optimize(qcore::singlet(), opt));
  label(state);
}
BENCHMARK(BM_ChshOptimize)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
