#include "minirocket/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "minirocket/bias_fit.hpp"
#include "minirocket/error.hpp"
#include "minirocket/fast_transform.hpp"
#include "minirocket/reference.hpp"

namespace minirocket {

namespace {

TimeSeriesDataset random_dataset(std::mt19937_64& rng, std::size_t rows, std::size_t length) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> offset(-10.0, 10.0), scale(0.1, 5.0);
  TimeSeriesDataset d;
  d.length = length;
  for (std::size_t i = 0; i < rows; ++i) {
    const double o = offset(rng), s = scale(rng);
    // Random walk plus noise: smooth enough for dilations to matter.
    double level = 0.0;
    for (std::size_t t = 0; t < length; ++t) {
      level += 0.3 * normal(rng);
      d.values.push_back(o + s * (level + normal(rng)));
    }
    d.labels.push_back(std::to_string(i % 2));
  }
  return d;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

SelfTestReport run_selftest(const SelfTestOptions& options) {
  if (options.cases == 0) throw Error(ErrorCode::invalid_argument, "self-test needs at least one case");
  if (options.min_length < kKernelLength || options.max_length < options.min_length ||
      options.max_examples == 0)
    throw Error(ErrorCode::invalid_argument, "invalid self-test ranges");

  SelfTestReport report;
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> length_dist(options.min_length, options.max_length);
  std::uniform_int_distribution<std::size_t> rows_dist(1, options.max_examples);
  std::uniform_int_distribution<std::size_t> per_kernel_dist(1, kDefaultNumFeatures / kNumKernels);
  std::uniform_int_distribution<std::uint64_t> seed_dist;
  TransformOptions transform_options;
  transform_options.invert_padding_parity = options.inject_parity_fault;

  for (std::size_t c = 0; c < options.cases; ++c) {
    const std::size_t length = length_dist(rng);
    const auto train = random_dataset(rng, rows_dist(rng), length);
    const auto test = random_dataset(rng, rows_dist(rng), length);
    const auto plan = plan_dilations(length, kNumKernels * per_kernel_dist(rng));
    const auto q = quantile_sequence(plan.total_features());

    TransformParameters fast, naive;
    if (c % 2 == 0) {
      const auto seed = seed_dist(rng);
      fast = fit_biases(train, plan, q, seed);
      naive = reference::fit_biases_naive(train, plan, q, seed);
      ++report.random_variant_cases;
    } else {
      fast = fit_biases_deterministic(train, plan, q);
      naive = reference::fit_biases_deterministic_naive(train, plan, q);
      ++report.deterministic_cases;
    }
    const double bias_dev = max_abs_diff(fast.biases, naive.biases);

    // Both transforms share the fitted parameters, so only the
    // convolution/pooling arithmetic is under test here.
    double feature_dev = 0.0;
    for (const auto* data : {&train, &test}) {
      const auto f_fast = transform(*data, fast, transform_options);
      const auto f_naive = reference::transform_naive(*data, fast);
      feature_dev = std::max(feature_dev, max_abs_diff(f_fast.values, f_naive.values));
    }

    const auto& triple = kernel_indices()[c % kNumKernels];
    const auto d = plan.dilations[c % plan.num_dilations()];
    const double conv_dev = max_abs_diff(convolve_one(test.series(0), triple, d),
                                         reference::convolve_naive(test.series(0),
                                                                   kernel_weights(triple).weights, d));

    ++report.cases;
    report.max_feature_deviation = std::max(report.max_feature_deviation, feature_dev);
    report.max_bias_deviation = std::max(report.max_bias_deviation, bias_dev);
    report.max_convolution_deviation = std::max(report.max_convolution_deviation, conv_dev);
    if (feature_dev > options.tolerance) ++report.failing_cases;
  }
  return report;
}

}  // namespace minirocket
