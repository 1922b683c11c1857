#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace minirocket {

/// Equal-length univariate series stored row-major. `labels` is either empty
/// (unlabelled data for prediction) or holds one label per series.
struct TimeSeriesDataset {
  std::string name;
  std::size_t length = 0;
  std::vector<double> values;
  std::vector<std::string> labels;

  std::size_t size() const noexcept { return length == 0 ? 0 : values.size() / length; }
  bool empty() const noexcept { return size() == 0; }
  bool labelled() const noexcept { return !labels.empty(); }

  std::span<const double> series(std::size_t i) const noexcept {
    return {values.data() + i * length, length};
  }
  std::span<double> series(std::size_t i) noexcept { return {values.data() + i * length, length}; }

  void push_back(std::span<const double> x, std::string label);

  /// Rows picked by index, in the given order.
  TimeSeriesDataset subset(std::span<const std::size_t> rows) const;
};

/// Throws unless the dataset is non-empty, rectangular, at least length 9, finite
/// and (if labelled) has one label per row.
void validate(const TimeSeriesDataset& dataset);

/// Examples x features, row-major.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) noexcept { return values[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values[i * cols + j]; }

  std::span<double> row(std::size_t i) noexcept { return {values.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {values.data() + i * cols, cols};
  }

  /// Stacks `other` below this matrix; column counts must agree.
  void append_rows(const FeatureMatrix& other);
};

}  // namespace minirocket
