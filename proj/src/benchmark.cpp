#include "minirocket/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <random>

#include "minirocket/bias_fit.hpp"
#include "minirocket/error.hpp"
#include "minirocket/fast_transform.hpp"
#include "minirocket/reference.hpp"

namespace minirocket {

namespace {

template <typename F>
double time_ms(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

TimeSeriesDataset random_walks(std::size_t rows, std::size_t length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  TimeSeriesDataset d;
  d.length = length;
  d.values.reserve(rows * length);
  for (std::size_t i = 0; i < rows; ++i) {
    double level = 0.0;
    for (std::size_t t = 0; t < length; ++t) d.values.push_back(level += normal(rng));
    d.labels.push_back(std::to_string(i % 2));
  }
  return d;
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::empty_input, "median of nothing");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<BenchRow> run_benchmark(const BenchOptions& options) {
  if (options.lengths.empty() || options.examples.empty() || options.repeats == 0)
    throw Error(ErrorCode::invalid_argument, "benchmark needs lengths, example counts and repeats");

  std::vector<BenchRow> rows;
  for (auto length : options.lengths) {
    for (auto n : options.examples) {
      const auto data = random_walks(n, length, options.seed + length * 7919 + n);
      const auto params = fit(data, options.num_features, kDefaultMaxDilations,
                              BiasVariant::random_example, options.seed);
      std::vector<double> fast, naive;
      volatile double sink = 0.0;
      for (std::size_t r = 0; r < options.repeats; ++r) {
        fast.push_back(time_ms([&] { sink = sink + transform(data, params).values.back(); }));
        if (options.include_naive)
          naive.push_back(time_ms([&] { sink = sink + reference::transform_naive(data, params).values.back(); }));
      }
      BenchRow row;
      row.length = length;
      row.examples = n;
      row.fast_ms = median(fast);
      if (!naive.empty()) {
        row.naive_ms = median(naive);
        row.speedup = row.naive_ms / row.fast_ms;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<ScalingCheck> check_linear_scaling(std::span<const BenchRow> rows, double lo, double hi) {
  std::vector<ScalingCheck> checks;
  for (const auto& a : rows) {
    for (const auto& b : rows) {
      ScalingCheck c;
      if (a.examples == b.examples && b.length == 2 * a.length) {
        c = {"length", a.length, b.length, a.examples, b.fast_ms / a.fast_ms, false};
      } else if (a.length == b.length && b.examples == 2 * a.examples) {
        c = {"examples", a.examples, b.examples, a.length, b.fast_ms / a.fast_ms, false};
      } else {
        continue;
      }
      c.within_bounds = c.ratio >= lo && c.ratio <= hi;
      checks.push_back(c);
    }
  }
  return checks;
}

void write_bench_csv(std::span<const BenchRow> rows, std::ostream& out) {
  out << "length,n,fast_ms,naive_ms,speedup\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.3f,%.3f,%.2f\n", r.length, r.examples, r.fast_ms,
                  r.naive_ms, r.speedup);
    out << buf;
  }
}

}  // namespace minirocket
