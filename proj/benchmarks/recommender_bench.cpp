#include <benchmark/benchmark.h>

#include <random>

#include "planpeer/recommender.hpp"

namespace {

planpeer::EvaluationMatrix random_matrix(std::size_t cities, std::size_t items) {
  std::mt19937_64 rng(3);
  std::vector<std::string> city_ids, item_ids;
  for (std::size_t i = 0; i < cities; ++i) city_ids.push_back("city-" + std::to_string(i));
  for (std::size_t j = 0; j < items; ++j) item_ids.push_back("item-" + std::to_string(j));
  std::vector<std::uint8_t> cells(cities * items);
  for (auto& c : cells) c = static_cast<std::uint8_t>(rng() % 2);
  return planpeer::EvaluationMatrix(city_ids, item_ids, cells, std::vector<std::uint8_t>(cells.size(), 0));
}

void BM_Recommend(benchmark::State& state) {
  const auto m = random_matrix(static_cast<std::size_t>(state.range(0)), 120);
  planpeer::RecommendQuery q{"city-0", 5, 0.8, 0.6};
  for (auto _ : state) benchmark::DoNotOptimize(planpeer::recommend(m, q));
}
BENCHMARK(BM_Recommend)->Arg(50)->Arg(500)->Arg(5000);

}  // namespace
