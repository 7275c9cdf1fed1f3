// Serial reference vs OpenMP kernels: Θ application and propagator construction.

#include <benchmark/benchmark.h>

#include <map>
#include <memory>
#include <random>

#include "wigner/kernel_table.hpp"
#include "wigner/propagation.hpp"
#include "wigner/wigner_op.hpp"

using namespace wigner;

namespace {

const KernelTable& table_for(int k, int m) {
  static std::map<std::pair<int, int>, std::unique_ptr<KernelTable>> cache;
  auto& slot = cache[{k, m}];
  if (!slot) slot = std::make_unique<KernelTable>(PotentialSpec::gaussian(1.0, 1.0), VelocityGrid(k, 9.6 / k),
                                                  SpaceGrid(10.0, m));
  return *slot;
}

void BM_ThetaSerial(benchmark::State& st) {
  const auto& t = table_for(static_cast<int>(st.range(0)), 20);
  std::mt19937_64 rng(7);
  const GridFunction f = random_even_function(t.velocity_grid(), rng);
  for (auto _ : st) benchmark::DoNotOptimize(serial::apply_theta(t, 10, f));
}

void BM_ThetaParallel(benchmark::State& st) {
  const auto& t = table_for(static_cast<int>(st.range(0)), 20);
  std::mt19937_64 rng(7);
  const GridFunction f = random_even_function(t.velocity_grid(), rng);
  for (auto _ : st) benchmark::DoNotOptimize(apply_theta(t, 10, f));
}

void BM_PropagatorSerial(benchmark::State& st) {
  const auto& t = table_for(static_cast<int>(st.range(0)), 50);
  for (auto _ : st) benchmark::DoNotOptimize(serial::build_propagator(t, Parity::even, Direction::l_to_r));
}

void BM_PropagatorParallel(benchmark::State& st) {
  const auto& t = table_for(static_cast<int>(st.range(0)), 50);
  for (auto _ : st) benchmark::DoNotOptimize(build_propagator(t, Parity::even, Direction::l_to_r));
}

}  // namespace

BENCHMARK(BM_ThetaSerial)->Arg(64)->Arg(256);
BENCHMARK(BM_ThetaParallel)->Arg(64)->Arg(256);
BENCHMARK(BM_PropagatorSerial)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PropagatorParallel)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
