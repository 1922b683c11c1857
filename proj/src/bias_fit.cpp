#include "minirocket/bias_fit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "minirocket/error.hpp"
#include "minirocket/fast_transform.hpp"

namespace minirocket {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_training_set(const TimeSeriesDataset& train, const DilationPlan& plan,
                        std::span<const double> quantiles) {
  if (train.empty()) throw Error(ErrorCode::empty_input, "training set is empty");
  if (train.length != plan.input_length)
    throw Error(ErrorCode::length_mismatch,
                "training series length " + std::to_string(train.length) +
                    " does not match planned length " + std::to_string(plan.input_length));
  if (quantiles.size() != plan.total_features())
    throw Error(ErrorCode::layout_mismatch, "quantile sequence length does not match the plan");
}

TransformParameters make_params(const DilationPlan& plan, std::span<const double> quantiles) {
  TransformParameters params;
  params.plan = plan;
  params.quantiles.assign(quantiles.begin(), quantiles.end());
  params.biases.assign(plan.total_features(), 0.0);
  return params;
}

struct Combination {
  std::size_t dilation_index;
  std::size_t kernel_index;
  std::size_t first_slot;
  std::size_t num_slots;
};

std::vector<Combination> combinations(const DilationPlan& plan) {
  std::vector<Combination> out;
  out.reserve(plan.num_dilations() * kNumKernels);
  std::size_t slot = 0;
  for (std::size_t j = 0; j < plan.num_dilations(); ++j) {
    for (std::size_t k = 0; k < kNumKernels; ++k) {
      out.push_back({j, k, slot, plan.features_per_dilation[j]});
      slot += plan.features_per_dilation[j];
    }
  }
  return out;
}

// Same interpolation as quantile_sorted(), but only the two order
// statistics it needs are located.
double quantile_select(std::vector<double>& values, double q) {
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(lo);
  const auto nth = values.begin() + static_cast<std::ptrdiff_t>(lo);
  std::nth_element(values.begin(), nth, values.end());
  if (frac == 0.0) return *nth;
  const double above = *std::min_element(nth + 1, values.end());
  return *nth + frac * (above - *nth);
}

// Selection wins for a handful of quantiles, a full sort beyond that.
constexpr std::size_t kSortThreshold = 6;

void assign_quantiles(std::vector<double>& output, const Combination& c,
                      TransformParameters& params) {
  if (c.num_slots > kSortThreshold) {
    std::sort(output.begin(), output.end());
    for (std::size_t f = 0; f < c.num_slots; ++f) {
      const std::size_t slot = c.first_slot + f;
      params.biases[slot] = quantile_sorted(output, params.quantiles[slot]);
    }
    return;
  }
  for (std::size_t f = 0; f < c.num_slots; ++f) {
    const std::size_t slot = c.first_slot + f;
    params.biases[slot] = quantile_select(output, params.quantiles[slot]);
  }
}

}  // namespace

void TransformParameters::check_layout() const {
  const std::size_t expected = plan.total_features();
  if (biases.size() != expected || quantiles.size() != expected)
    throw Error(ErrorCode::layout_mismatch,
                "parameters hold " + std::to_string(biases.size()) + " biases but the plan has " +
                    std::to_string(expected) + " feature slots");
  if (plan.dilations.size() != plan.features_per_dilation.size())
    throw Error(ErrorCode::layout_mismatch, "dilations and feature counts differ in length");
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorCode::empty_input, "quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorCode::invalid_argument, "quantile must lie in [0, 1]");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double quantile(std::span<const double> values, double q) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return quantile_sorted(sorted, q);
}

std::size_t select_example(std::uint64_t seed, std::size_t combination, std::size_t num_examples) {
  const std::uint64_t h = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(combination)));
  // Multiply-shift maps the 64-bit draw onto [0, num_examples).
  return static_cast<std::size_t>((static_cast<unsigned __int128>(h) * num_examples) >> 64);
}

TransformParameters fit_biases(const TimeSeriesDataset& train, const DilationPlan& plan,
                               std::span<const double> quantiles, std::uint64_t seed) {
  check_training_set(train, plan, quantiles);
  auto params = make_params(plan, quantiles);
  params.variant = BiasVariant::random_example;
  params.seed = seed;

  const auto combos = combinations(plan);
  const auto& kernels = kernel_indices();
  const auto count = static_cast<std::ptrdiff_t>(combos.size());

#pragma omp parallel
  {
    ConvolutionScratch scratch(train.length);
    std::vector<double> output(train.length);
#pragma omp for schedule(static)
    for (std::ptrdiff_t ci = 0; ci < count; ++ci) {
      const auto& c = combos[static_cast<std::size_t>(ci)];
      const std::size_t example = select_example(seed, static_cast<std::size_t>(ci), train.size());
      scratch.load(train.series(example));
      auto conv = scratch.convolve(kernels[c.kernel_index], plan.dilations[c.dilation_index]);
      output.assign(conv.begin(), conv.end());
      assign_quantiles(output, c, params);
    }
  }
  return params;
}

TransformParameters fit_biases_deterministic(const TimeSeriesDataset& train,
                                             const DilationPlan& plan,
                                             std::span<const double> quantiles) {
  check_training_set(train, plan, quantiles);
  auto params = make_params(plan, quantiles);
  params.variant = BiasVariant::deterministic;
  params.seed.reset();

  const auto combos = combinations(plan);
  const auto& kernels = kernel_indices();
  const auto count = static_cast<std::ptrdiff_t>(combos.size());

#pragma omp parallel
  {
    ConvolutionScratch scratch(train.length);
    // One combination's outputs over the whole training set.
    std::vector<double> pooled;
    pooled.reserve(train.values.size());
#pragma omp for schedule(static)
    for (std::ptrdiff_t ci = 0; ci < count; ++ci) {
      const auto& c = combos[static_cast<std::size_t>(ci)];
      pooled.clear();
      for (std::size_t i = 0; i < train.size(); ++i) {
        scratch.load(train.series(i));
        auto conv = scratch.convolve(kernels[c.kernel_index], plan.dilations[c.dilation_index]);
        pooled.insert(pooled.end(), conv.begin(), conv.end());
      }
      assign_quantiles(pooled, c, params);
    }
  }
  return params;
}

TransformParameters fit(const TimeSeriesDataset& train, std::size_t num_features,
                        std::size_t max_dilations_per_kernel, BiasVariant variant,
                        std::uint64_t seed) {
  validate(train);
  const auto plan = plan_dilations(train.length, num_features, max_dilations_per_kernel);
  const auto q = quantile_sequence(plan.total_features());
  return variant == BiasVariant::deterministic ? fit_biases_deterministic(train, plan, q)
                                               : fit_biases(train, plan, q, seed);
}

}  // namespace minirocket
