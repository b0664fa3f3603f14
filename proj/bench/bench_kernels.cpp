#include <benchmark/benchmark.h>

#include "spinsub/config.hpp"
#include "spinsub/diffraction.hpp"
#include "spinsub/kernels.hpp"

using namespace spinsub;

namespace {

std::string fixture(const std::string& name) { return std::string(SPINSUB_FIXTURE_DIR) + "/" + name + ".json"; }

const FourierBlock& c4_block() {
  static const FourierBlock b = fourier_block(load_config(fixture("c4")).spin_system(), Character{{1}});
  return b;
}

const kernels::WeightGrid& rs_patch() {
  static const WeightedPatch p =
      make_weighted_patch(load_config(fixture("rudin_shapiro")).spin_system(), {0, 0}, 16, Character{{1}});
  return p.grid;
}

std::vector<std::vector<long>> lags(int radius) {
  std::vector<std::vector<long>> out;
  for (long j = -radius; j <= radius; ++j) out.push_back({j});
  return out;
}

void BM_LyapunovSerial(benchmark::State& state) {
  const QuadratureGrid g{1, state.range(0)};
  for (auto _ : state) benchmark::DoNotOptimize(kernels::lyapunov_integrand_serial(c4_block(), 12, MatrixNorm::Frobenius, g));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LyapunovParallel(benchmark::State& state) {
  const QuadratureGrid g{1, state.range(0)};
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::lyapunov_integrand_parallel(c4_block(), 12, MatrixNorm::Frobenius, g));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_AutocorrelationSerial(benchmark::State& state) {
  const auto l = lags(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::autocorrelation_serial(rs_patch(), l));
}

void BM_AutocorrelationParallel(benchmark::State& state) {
  const auto l = lags(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::autocorrelation_parallel(rs_patch(), l));
}

}  // namespace

BENCHMARK(BM_LyapunovSerial)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LyapunovParallel)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_AutocorrelationSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AutocorrelationParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
