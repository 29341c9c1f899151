#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "latkpp/dispersion.hpp"
#include "latkpp/forcing.hpp"
#include "latkpp/lattice.hpp"
#include "latkpp/reaction.hpp"

using namespace latkpp;

namespace {

LatticeState step_datum(std::int64_t half_width) {
  return LatticeState::sample(-half_width, half_width, 1,
                              [](double x) { return x <= 0.0 ? 1.0 : 0.0; });
}

}  // namespace

static void BM_Rhs(benchmark::State& state) {
  const Reaction reaction = Reaction::logistic(Forcing::periodic(1.0, 0.5, 1.0));
  const LatticeState u = step_datum(state.range(0));
  std::vector<double> out;
  for (auto _ : state) {
    rhs(u, reaction, 0.3, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(u.size()));
}
BENCHMARK(BM_Rhs)->RangeMultiplier(4)->Range(256, 16384);

static void BM_Rk4Step(benchmark::State& state) {
  const Reaction reaction = Reaction::logistic(Forcing::constant(1.0));
  Integrator integrator(reaction);
  LatticeState u = step_datum(state.range(0));
  for (auto _ : state) {
    integrator.step(u, 0.01);
    benchmark::DoNotOptimize(u.values().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(u.size()));
}
BENCHMARK(BM_Rk4Step)->RangeMultiplier(4)->Range(256, 16384);

static void BM_MuStar(benchmark::State& state) {
  double a = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mu_star(a));
    a = a < 4.0 ? a + 0.01 : 0.5;
  }
}
BENCHMARK(BM_MuStar);

static void BM_RootPair(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(root_pair(2.5, 1.0));
}
BENCHMARK(BM_RootPair);

static void BM_EstimateAverages(benchmark::State& state) {
  const Forcing forcing = Forcing::switching({0.5, 1.5}, 1.0, 3);
  AverageConfig config;
  config.horizon = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_averages(forcing, config));
}
BENCHMARK(BM_EstimateAverages)->Arg(400)->Arg(1600)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
