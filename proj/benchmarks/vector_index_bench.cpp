#include <benchmark/benchmark.h>

#include <random>

#include "planpeer/vector_index.hpp"

namespace {

planpeer::Embedding random_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<float> g;
  planpeer::Embedding e;
  e.values.resize(dim);
  for (auto& v : e.values) v = g(rng);
  return e;
}

void BM_FlatSearch(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const std::size_t dim = 1536;
  planpeer::VectorIndex index("bench");
  for (std::int64_t i = 0; i < state.range(0); ++i) index.add("c:" + std::to_string(i), random_vector(rng, dim));
  index.freeze();
  const auto query = random_vector(rng, dim);
  for (auto _ : state) benchmark::DoNotOptimize(index.top_by_similarity(query, 20));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FlatSearch)->Arg(100)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

}  // namespace
