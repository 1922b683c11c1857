#include "minirocket/reference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "minirocket/error.hpp"

namespace minirocket::reference {

namespace {

void check_dilation(std::size_t length, std::size_t dilation) {
  if (dilation == 0 || length < kKernelLength || 8 * dilation > length - 1)
    throw Error(ErrorCode::invalid_argument,
                "dilation " + std::to_string(dilation) + " is too large for series length " +
                    std::to_string(length));
}

void check_inputs(const TimeSeriesDataset& train, const DilationPlan& plan,
                  std::span<const double> quantiles) {
  if (train.empty()) throw Error(ErrorCode::empty_input, "training set is empty");
  if (train.length != plan.input_length)
    throw Error(ErrorCode::length_mismatch, "training series length does not match the plan");
  if (quantiles.size() != plan.total_features())
    throw Error(ErrorCode::layout_mismatch, "quantile sequence length does not match the plan");
}

}  // namespace

std::vector<double> convolve_naive(std::span<const double> x,
                                   const std::array<double, kKernelLength>& weights,
                                   std::size_t dilation) {
  check_dilation(x.size(), dilation);
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const auto d = static_cast<std::ptrdiff_t>(dilation);
  std::vector<double> out(x.size(), 0.0);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(kKernelLength); ++j) {
      const std::ptrdiff_t idx = i - 4 * d + j * d;
      const double value = (idx >= 0 && idx < n) ? x[static_cast<std::size_t>(idx)] : 0.0;
      sum += value * weights[static_cast<std::size_t>(j)];
    }
    out[static_cast<std::size_t>(i)] = sum;
  }
  return out;
}

double ppv_naive(std::span<const double> c, double bias) {
  if (c.empty()) throw Error(ErrorCode::empty_input, "ppv of an empty vector");
  std::size_t positive = 0;
  for (double v : c)
    if (v - bias > 0.0) ++positive;
  return static_cast<double>(positive) / static_cast<double>(c.size());
}

namespace {

double interpolate_sorted(const std::vector<double>& values, double q) {
  const double position = q * static_cast<double>(values.size() - 1);
  const double below = std::floor(position);
  const double above = std::ceil(position);
  const double lower = values[static_cast<std::size_t>(below)];
  const double upper = values[static_cast<std::size_t>(above)];
  if (above == below) return lower;
  return lower + (position - below) * (upper - lower);
}

}  // namespace

double quantile_naive(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::empty_input, "quantile of an empty sample");
  std::sort(values.begin(), values.end());
  return interpolate_sorted(values, q);
}

TransformParameters fit_biases_naive(const TimeSeriesDataset& train, const DilationPlan& plan,
                                     std::span<const double> quantiles, std::uint64_t seed) {
  check_inputs(train, plan, quantiles);
  TransformParameters params;
  params.plan = plan;
  params.quantiles.assign(quantiles.begin(), quantiles.end());
  params.variant = BiasVariant::random_example;
  params.seed = seed;

  std::size_t combination = 0;
  for (std::size_t j = 0; j < plan.num_dilations(); ++j) {
    for (std::size_t k = 0; k < kNumKernels; ++k, ++combination) {
      const auto example = select_example(seed, combination, train.size());
      const auto kernel = kernel_weights(kernel_indices()[k]);
      auto c = convolve_naive(train.series(example), kernel.weights, plan.dilations[j]);
      std::sort(c.begin(), c.end());
      for (std::size_t f = 0; f < plan.features_per_dilation[j]; ++f)
        params.biases.push_back(interpolate_sorted(c, quantiles[params.biases.size()]));
    }
  }
  return params;
}

TransformParameters fit_biases_deterministic_naive(const TimeSeriesDataset& train,
                                                   const DilationPlan& plan,
                                                   std::span<const double> quantiles) {
  check_inputs(train, plan, quantiles);
  TransformParameters params;
  params.plan = plan;
  params.quantiles.assign(quantiles.begin(), quantiles.end());
  params.variant = BiasVariant::deterministic;

  for (std::size_t j = 0; j < plan.num_dilations(); ++j) {
    for (std::size_t k = 0; k < kNumKernels; ++k) {
      const auto kernel = kernel_weights(kernel_indices()[k]);
      std::vector<double> all;
      for (std::size_t i = 0; i < train.size(); ++i) {
        const auto c = convolve_naive(train.series(i), kernel.weights, plan.dilations[j]);
        all.insert(all.end(), c.begin(), c.end());
      }
      std::sort(all.begin(), all.end());
      for (std::size_t f = 0; f < plan.features_per_dilation[j]; ++f)
        params.biases.push_back(interpolate_sorted(all, quantiles[params.biases.size()]));
    }
  }
  return params;
}

FeatureMatrix transform_naive(const TimeSeriesDataset& dataset, const TransformParameters& params) {
  params.check_layout();
  const auto& plan = params.plan;
  if (dataset.length != plan.input_length)
    throw Error(ErrorCode::length_mismatch, "dataset series length does not match fitted length");

  FeatureMatrix features(dataset.size(), params.num_features());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    std::size_t slot = 0;
    for (std::size_t j = 0; j < plan.num_dilations(); ++j) {
      const std::size_t d = plan.dilations[j];
      for (std::size_t k = 0; k < kNumKernels; ++k) {
        const auto kernel = kernel_weights(kernel_indices()[k]);
        const auto c = convolve_naive(dataset.series(i), kernel.weights, d);
        std::span<const double> pooled(c);
        if ((j + k) % 2 == 1) pooled = pooled.subspan(4 * d, c.size() - 8 * d);
        for (std::size_t f = 0; f < plan.features_per_dilation[j]; ++f, ++slot)
          features(i, slot) = ppv_naive(pooled, params.biases[slot]);
      }
    }
  }
  return features;
}

}  // namespace minirocket::reference
