// OpenMP kernels against their serial references.
//   ./build/bench/bench_kernels --benchmark_counters_tabular=true

#include <map>

#include <benchmark/benchmark.h>

#include "cdasim/sim/simulation.hpp"
#include "cdasim/stats/facts.hpp"
#include "oracles/series.hpp"

using namespace cdasim;

namespace {

const std::vector<double>& returns(std::size_t n) {
  static std::map<std::size_t, std::vector<double>> cache;
  auto& v = cache[n];
  if (v.empty()) v = oracle::garch_returns(42, n);
  return v;
}

const std::vector<double>& prices(std::size_t n) {
  static std::map<std::size_t, std::vector<double>> cache;
  auto& v = cache[n];
  if (v.empty()) v = oracle::price_path(returns(n), 100.0);
  return v;
}

template <stats::AcfResult (*Fn)(std::span<const double>, std::size_t)>
void acf_kernel(benchmark::State& state) {
  const auto& x = returns(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(x, 200));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <stats::FirstPassage (*Fn)(std::span<const double>, double)>
void passage_kernel(benchmark::State& state) {
  const auto& p = prices(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(p, 5.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void simulation(benchmark::State& state) {
  sim::ScenarioConfig cfg = *sim::preset("small-univariate");
  cfg.t_close = 300;
  sim::RunOptions opt;
  opt.parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(sim::run(cfg, opt));
}

}  // namespace

BENCHMARK(acf_kernel<stats::acf>)->Name("acf/openmp")->Arg(10000)->Arg(100000);
BENCHMARK(acf_kernel<stats::acf_serial>)->Name("acf/serial")->Arg(10000)->Arg(100000);
BENCHMARK(passage_kernel<stats::first_passage_times>)->Name("first_passage/openmp")->Arg(2000)->Arg(10000);
BENCHMARK(passage_kernel<stats::first_passage_serial>)->Name("first_passage/serial")->Arg(2000)->Arg(10000);
BENCHMARK(simulation)->Name("small_run_300s/decide")->Arg(1)->Arg(0)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
