#include <benchmark/benchmark.h>

#include "ksl/generators.hpp"
#include "ksl/gpc.hpp"
#include "ksl/offline.hpp"
#include "ksl/spanner.hpp"
#include "ksl/tree_decomposition.hpp"

namespace {

using namespace ksl;

void BM_AllPairsGrid(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const Graph g = grid_graph(side, side);
  for (auto _ : state) benchmark::DoNotOptimize(all_pairs_shortest_paths(g));
  state.SetComplexityN(side * side);
}
BENCHMARK(BM_AllPairsGrid)->RangeMultiplier(2)->Range(4, 32)->Complexity();

struct Fixture {
  Graph graph;
  TreeDecomposition td;
  DistanceMatrix dm;
  Configuration init;
  std::vector<Vertex> sigma;
};

Fixture make_fixture(int n_vertices, int k, int n) {
  SplitMix64 rng(12345);
  auto [g, td] = random_partial_ktree(rng, n_vertices, 3, 8);
  Fixture f{std::move(g), std::move(td), {}, {}, {}};
  f.dm = all_pairs_shortest_paths(f.graph);
  f.init = random_configuration(rng, n_vertices, k);
  f.sigma = random_sequence(rng, n_vertices, static_cast<std::size_t>(n));
  return f;
}

void BM_OptDp(benchmark::State& state) {
  const Fixture f = make_fixture(25, static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(opt_cost_dp(f.dm, f.init, f.sigma));
}
BENCHMARK(BM_OptDp)->Args({2, 30})->Args({3, 30})->Args({3, 100})->Args({4, 20});

void BM_OptFlow(benchmark::State& state) {
  const Fixture f = make_fixture(25, static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(opt_cost_flow(f.dm, f.init, f.sigma));
}
BENCHMARK(BM_OptFlow)->Args({2, 30})->Args({3, 30})->Args({3, 100})->Args({4, 20});

void BM_GpcRoundTrip(benchmark::State& state) {
  const Fixture f = make_fixture(static_cast<int>(state.range(0)), 3, 60);
  const TreeDecomposition reduced = reduce_height(f.td);
  const OptResult opt = opt_cost_flow(f.dm, f.init, f.sigma);
  for (auto _ : state) {
    AdviceTape tape = generate_advice(f.dm, reduced, f.init, f.sigma, opt.schedule);
    benchmark::DoNotOptimize(run_online(f.dm, reduced, f.init, f.sigma, tape));
  }
}
BENCHMARK(BM_GpcRoundTrip)->Arg(25)->Arg(100)->Arg(400);

void BM_ReduceHeight(benchmark::State& state) {
  SplitMix64 rng(7);
  auto [g, td] = random_partial_ktree(rng, static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(reduce_height(td));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ReduceHeight)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_SpannerRoundTrip(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const Graph g = grid_graph(side, side);
  const DistanceMatrix dm = all_pairs_shortest_paths(g);
  const int n = side * side;
  const SpannerSystem sys({shortest_path_tree(g, dm, 0), shortest_path_tree(g, dm, n - 1)}, 3, 0);
  SplitMix64 rng(3);
  const Configuration init = random_configuration(rng, n, 2);
  const auto sigma = random_sequence(rng, n, 60);
  const OptResult opt = opt_cost_flow(dm, init, sigma);
  for (auto _ : state) {
    AdviceTape tape = generate_advice_spanner(dm, sys, init, sigma, opt.schedule);
    benchmark::DoNotOptimize(run_online_spanner(dm, sys, init, sigma, tape));
  }
}
BENCHMARK(BM_SpannerRoundTrip)->Arg(4)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
