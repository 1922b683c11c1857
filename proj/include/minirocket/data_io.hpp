#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>

#include "minirocket/bias_fit.hpp"
#include "minirocket/types.hpp"

namespace minirocket {

/// UCR-style text: one series per line, label first, then the values.
/// Throws Error(parse_error) naming the offending line.
TimeSeriesDataset load_delimited(const std::filesystem::path& path, char delimiter = '\t',
                                 bool has_labels = true);
TimeSeriesDataset parse_delimited(std::istream& in, char delimiter = '\t', bool has_labels = true,
                                  std::string name = {});

/// Values are written with 17 significant digits, so load(save(d)) == d exactly.
void save_delimited(const TimeSeriesDataset& dataset, const std::filesystem::path& path,
                    char delimiter = '\t');
void write_delimited(const TimeSeriesDataset& dataset, std::ostream& out, char delimiter = '\t');

enum class SyntheticKind { sine_freq, noise_vs_trend };

/// Two-class data, `n_per_class` rows of class "0" followed by class "1".
///   sine_freq:      sin(2 pi t / length) vs sin(4 pi t / length)
///   noise_vs_trend: noise only vs a linear ramp from -1 to 1
/// plus N(0, noise_sigma^2) noise from a seeded generator.
TimeSeriesDataset synthesize(SyntheticKind kind, std::size_t n_per_class, std::size_t length,
                             double noise_sigma, std::uint64_t seed);

/// Per-class proportional split; every class keeps at least one example on
/// each side. Rows keep their original relative order.
std::pair<TimeSeriesDataset, TimeSeriesDataset> stratified_resample(
    const TimeSeriesDataset& dataset, double train_fraction, std::uint64_t seed);

/// CSV with header f0..f{k-1},label. `labels` may be empty.
void write_features_csv(const FeatureMatrix& features, std::span<const std::string> labels,
                        std::ostream& out);
void save_features_csv(const FeatureMatrix& features, std::span<const std::string> labels,
                       const std::filesystem::path& path);

/// Binary parameter file: magic, format version, plan, biases as float64,
/// variant flag and seed. Quantiles are recomputed on load.
void write_parameters(const TransformParameters& params, std::ostream& out);
TransformParameters read_parameters(std::istream& in);
void save_parameters(const TransformParameters& params, const std::filesystem::path& path);
TransformParameters load_parameters(const std::filesystem::path& path);

}  // namespace minirocket
