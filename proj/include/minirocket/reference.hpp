#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "minirocket/bias_fit.hpp"
#include "minirocket/kernel_plan.hpp"
#include "minirocket/types.hpp"

// Serial, deliberately direct implementations used as ground truth for the
// optimised kernels and as the speed baseline. Every output value is an
// explicit nine-term multiply-add over the zero-padded input.
namespace minirocket::reference {

std::vector<double> convolve_naive(std::span<const double> x,
                                   const std::array<double, kKernelLength>& weights,
                                   std::size_t dilation);

double ppv_naive(std::span<const double> c, double bias);

/// Sorts a copy and interpolates; independent of bias_fit's quantile code.
double quantile_naive(std::vector<double> values, double q);

TransformParameters fit_biases_naive(const TimeSeriesDataset& train, const DilationPlan& plan,
                                     std::span<const double> quantiles, std::uint64_t seed);

TransformParameters fit_biases_deterministic_naive(const TimeSeriesDataset& train,
                                                   const DilationPlan& plan,
                                                   std::span<const double> quantiles);

FeatureMatrix transform_naive(const TimeSeriesDataset& dataset, const TransformParameters& params);

}  // namespace minirocket::reference
