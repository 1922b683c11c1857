#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "minirocket/kernel_plan.hpp"
#include "minirocket/types.hpp"

namespace minirocket {

enum class BiasVariant : std::uint8_t {
  random_example = 0,  // one training example per kernel/dilation combination
  deterministic = 1,   // whole training set per combination
};

/// Everything a transform needs. Feature slots are laid out dilation-major,
/// then kernel (lexicographic triple order), then bias index.
struct TransformParameters {
  DilationPlan plan;
  std::vector<double> quantiles;
  std::vector<double> biases;
  BiasVariant variant = BiasVariant::random_example;
  std::optional<std::uint64_t> seed;

  std::size_t num_features() const noexcept { return biases.size(); }

  /// Throws Error(layout_mismatch) if biases/quantiles disagree with the plan.
  void check_layout() const;
};

/// Linear-interpolation quantile of an unsorted sample.
double quantile(std::span<const double> values, double q);

/// Same estimator on an already ascending-sorted sample.
double quantile_sorted(std::span<const double> sorted, double q);

/// Training example used to fit the biases of combination `combination`
/// (= dilation_index * 84 + kernel_index). Counter-based, so the draw does
/// not depend on the order in which combinations are visited.
std::size_t select_example(std::uint64_t seed, std::size_t combination, std::size_t num_examples);

TransformParameters fit_biases(const TimeSeriesDataset& train, const DilationPlan& plan,
                               std::span<const double> quantiles, std::uint64_t seed);

TransformParameters fit_biases_deterministic(const TimeSeriesDataset& train,
                                             const DilationPlan& plan,
                                             std::span<const double> quantiles);

/// Plan + quantiles + biases in one go.
TransformParameters fit(const TimeSeriesDataset& train,
                        std::size_t num_features = kDefaultNumFeatures,
                        std::size_t max_dilations_per_kernel = kDefaultMaxDilations,
                        BiasVariant variant = BiasVariant::random_example,
                        std::uint64_t seed = 0);

}  // namespace minirocket
