#include <benchmark/benchmark.h>

#include <random>

#include "netinf/design.hpp"
#include "netinf/effects.hpp"
#include "netinf/graph.hpp"
#include "netinf/regress.hpp"
#include "netinf/simulate.hpp"

namespace {

using namespace netinf;

void BM_generate_er(benchmark::State& state) {
  const Index n = state.range(0);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_er(n, 0.01, seed++, false));
  }
}
BENCHMARK(BM_generate_er)->Arg(400)->Arg(900)->Arg(1600);

void BM_generate_ws(benchmark::State& state) {
  const Index n = state.range(0);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_ws(n, 1, 10, 0.05, seed++));
  }
}
BENCHMARK(BM_generate_ws)->Arg(400)->Arg(1600);

void BM_exposure_sparse(benchmark::State& state) {
  const Index n = state.range(0);
  const AdjacencyMatrix g = generate_er(n, 10.0 / static_cast<double>(n), 7, false);
  std::mt19937_64 rng(3);
  Eigen::VectorXd v(n);
  std::normal_distribution<double> normal;
  for (Index i = 0; i < n; ++i) v[i] = normal(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(exposure(g, v));
  }
}
BENCHMARK(BM_exposure_sparse)->Arg(1000)->Arg(10000);

Dataset bench_dataset(Index n, const AdjacencyMatrix& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return generate_dgp(n, g, ErrorSpec::homoscedastic(), rng).data;
}

void BM_fit_ols(benchmark::State& state) {
  const Index n = state.range(0);
  const AdjacencyMatrix g = generate_er(n, 0.01, 11, false);
  const Dataset data = bench_dataset(n, g, 13);
  const DesignMatrix design = build_design(data, {g}, DesignSpec::full);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_ols(design, data.outcome));
  }
}
BENCHMARK(BM_fit_ols)->Arg(400)->Arg(1600);

void BM_fit_gls_network(benchmark::State& state) {
  const Index n = state.range(0);
  const AdjacencyMatrix g = generate_er(n, 0.01, 17, false);
  const Dataset data = bench_dataset(n, g, 19);
  const DesignMatrix design = build_design(data, {g}, DesignSpec::full);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_gls_network(design, data.outcome, g));
  }
}
BENCHMARK(BM_fit_gls_network)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_estimate_total_known(benchmark::State& state) {
  const Index n = state.range(0);
  const AdjacencyMatrix g = generate_er(n, 0.01, 23, false);
  const Dataset data = bench_dataset(n, g, 29);
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_total_known(data, {g}, {VcovKind::hc3}));
  }
}
BENCHMARK(BM_estimate_total_known)->Arg(400)->Arg(900);

void BM_run_replicate(benchmark::State& state) {
  SimConfig config;
  config.n = state.range(0);
  config.graph.family = GraphFamily::er;
  config.graph.er_p = 0.01;
  config.errors = ErrorSpec::homoscedastic();
  config.estimators = {EstimatorKind::full, EstimatorKind::partial, EstimatorKind::naive};
  config.reps = 1000000;
  config.base_seed = 5;
  int rep = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_replicate(config, rep++));
  }
}
BENCHMARK(BM_run_replicate)->Arg(400)->Arg(900)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
