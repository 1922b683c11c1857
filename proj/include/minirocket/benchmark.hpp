#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "minirocket/kernel_plan.hpp"

namespace minirocket {

struct BenchOptions {
  std::vector<std::size_t> lengths{256, 512, 1024, 2048};
  std::vector<std::size_t> examples{100};
  std::size_t repeats = 3;
  std::size_t num_features = kDefaultNumFeatures;
  std::uint64_t seed = 0;
  bool include_naive = true;
};

struct BenchRow {
  std::size_t length = 0;
  std::size_t examples = 0;
  double fast_ms = 0.0;   // median over repeats
  double naive_ms = 0.0;  // median over repeats, 0 if skipped
  double speedup = 0.0;
};

/// Times the optimised and reference transforms over every
/// (length, examples) pair on random data with freshly fitted parameters.
/// Parameter fitting is excluded from the timings.
std::vector<BenchRow> run_benchmark(const BenchOptions& options);

struct ScalingCheck {
  std::string dimension;  // "length" or "examples"
  std::size_t from = 0;
  std::size_t to = 0;
  std::size_t fixed = 0;  // the other dimension
  double ratio = 0.0;
  bool within_bounds = false;
};

/// Every pair of rows where one dimension doubles and the other is equal.
std::vector<ScalingCheck> check_linear_scaling(std::span<const BenchRow> rows, double lo = 1.4,
                                               double hi = 2.6);

double median(std::vector<double> values);

void write_bench_csv(std::span<const BenchRow> rows, std::ostream& out);

}  // namespace minirocket
