#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "minirocket/bias_fit.hpp"
#include "minirocket/fast_transform.hpp"
#include "minirocket/reference.hpp"

namespace mr = minirocket;

namespace {

mr::TimeSeriesDataset random_walks(std::size_t rows, std::size_t length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  mr::TimeSeriesDataset d;
  d.length = length;
  for (std::size_t i = 0; i < rows; ++i) {
    double level = 0.0;
    for (std::size_t t = 0; t < length; ++t) d.values.push_back(level += normal(rng));
    d.labels.push_back(std::to_string(i % 2));
  }
  return d;
}

void BM_Transform(benchmark::State& state) {
  omp_set_num_threads(1);
  const auto length = static_cast<std::size_t>(state.range(0));
  const auto rows = static_cast<std::size_t>(state.range(1));
  const auto data = random_walks(rows, length, 1);
  const auto params = mr::fit(data);
  for (auto _ : state) benchmark::DoNotOptimize(mr::transform(data, params));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows));
}

void BM_TransformNaive(benchmark::State& state) {
  const auto length = static_cast<std::size_t>(state.range(0));
  const auto rows = static_cast<std::size_t>(state.range(1));
  const auto data = random_walks(rows, length, 1);
  const auto params = mr::fit(data);
  for (auto _ : state) benchmark::DoNotOptimize(mr::reference::transform_naive(data, params));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows));
}

void BM_Fit(benchmark::State& state) {
  omp_set_num_threads(1);
  const auto data = random_walks(static_cast<std::size_t>(state.range(1)),
                                 static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(mr::fit(data));
}

}  // namespace

BENCHMARK(BM_Transform)->ArgsProduct({{256, 512, 1024, 2048}, {100}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransformNaive)->Args({1024, 100})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Fit)->Args({1024, 100})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
