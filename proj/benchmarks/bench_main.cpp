// Microbenchmarks for the walk hot path and the exact machinery.

#include <benchmark/benchmark.h>

#include <random>

#include "ripple/engine.hpp"
#include "ripple/graph.hpp"
#include "ripple/hon.hpp"
#include "ripple/oracle.hpp"
#include "ripple/pattern_key.hpp"
#include "ripple/stratify.hpp"

namespace {

ripple::InputGraph er_graph(ripple::VertexId n, double p, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<ripple::VertexId, ripple::VertexId>> e;
  for (ripple::VertexId u = 0; u < n; ++u)
    for (ripple::VertexId v = u + 1; v < n; ++v)
      if (unit(rng) < p) e.emplace_back(u, v);
  return ripple::InputGraph::from_edges(n, e);
}

const ripple::InputGraph& bench_graph() {
  static ripple::InputGraph g = er_graph(200, 0.05, 7);
  return g;
}

ripple::Cis some_state(const ripple::InputGraph& g, int m, uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (;;) {
    ripple::Cis s;
    ripple::VertexId v = std::uniform_int_distribution<ripple::VertexId>(
        0, g.num_vertices() - 1)(rng);
    s.push(v);
    while (s.size < m) {
      auto nb = g.neighbors(s.v[std::uniform_int_distribution<int>(0, s.size - 1)(rng)]);
      if (nb.empty()) break;
      ripple::VertexId w = nb[std::uniform_int_distribution<size_t>(0, nb.size() - 1)(rng)];
      if (!s.contains(w)) s.push(w);
    }
    if (s.size == m) {
      s.normalize();
      return s;
    }
  }
}

void BM_SamplerDraw(benchmark::State& state) {
  const auto& g = bench_graph();
  ripple::Cis s = some_state(g, int(state.range(0)), 11);
  std::mt19937_64 rng(3);
  for (auto _ : state) {
    ripple::NeighborSampler sampler(g, s);
    benchmark::DoNotOptimize(sampler.draw(rng));
  }
}
BENCHMARK(BM_SamplerDraw)->Arg(2)->Arg(3)->Arg(4);

void BM_PatternInternHit(benchmark::State& state) {
  const auto& g = bench_graph();
  ripple::Cis s = some_state(g, 3, 13);
  std::mt19937_64 rng(5);
  ripple::Cis t = ripple::sample_hon_neighbor(g, s, rng);
  ripple::SmallGraph merged = ripple::merge_edge_subgraph(g, s, t);
  ripple::PatternCache cache;
  cache.intern(merged);
  for (auto _ : state) benchmark::DoNotOptimize(cache.intern(merged));
}
BENCHMARK(BM_PatternInternHit);

void BM_CanonicalKey(benchmark::State& state) {
  const auto& g = bench_graph();
  ripple::Cis s = some_state(g, 3, 13);
  std::mt19937_64 rng(5);
  ripple::Cis t = ripple::sample_hon_neighbor(g, s, rng);
  ripple::SmallGraph merged = ripple::merge_edge_subgraph(g, s, t);
  for (auto _ : state) benchmark::DoNotOptimize(ripple::pattern_key(merged));
}
BENCHMARK(BM_CanonicalKey);

void BM_Rho(benchmark::State& state) {
  const auto& g = bench_graph();
  std::mt19937_64 rng(17);
  ripple::SeedSet seeds = ripple::select_seeds(g, 4, 4, rng);
  ripple::Stratification strat = ripple::make_stratification(g, seeds, 4);
  ripple::Cis s = some_state(g, 3, 19);
  for (auto _ : state) benchmark::DoNotOptimize(ripple::rho(g, strat, s));
}
BENCHMARK(BM_Rho);

void BM_ReservoirOffer(benchmark::State& state) {
  ripple::Reservoir res(1 << 12, 3);
  ripple::Cis s{1, 2, 3};
  std::mt19937_64 rng(23);
  for (auto _ : state) res.offer(s, rng);
}
BENCHMARK(BM_ReservoirOffer);

void BM_EnumerateCis(benchmark::State& state) {
  const auto& g = bench_graph();
  for (auto _ : state) {
    uint64_t n = 0;
    ripple::enumerate_cis(g, int(state.range(0)), [&](const ripple::Cis&) { ++n; });
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_EnumerateCis)->Arg(3)->Arg(4);

void BM_EndToEnd(benchmark::State& state) {
  const auto& g = bench_graph();
  for (auto _ : state) {
    ripple::RunConfig cfg;
    cfg.k = 4;
    cfg.epsilon = 0.1;
    cfg.n1 = 4;
    cfg.rng_seed = 29;
    ripple::RippleEngine engine(g, cfg);
    benchmark::DoNotOptimize(engine.run().total);
  }
}
BENCHMARK(BM_EndToEnd)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
