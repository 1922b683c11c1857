#include "minirocket/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "minirocket/error.hpp"
#include "minirocket/kernel_plan.hpp"

namespace minirocket {

void TimeSeriesDataset::push_back(std::span<const double> x, std::string label) {
  if (empty() && values.empty()) length = x.size();
  if (x.size() != length)
    throw Error(ErrorCode::length_mismatch, "series length differs from the dataset length");
  values.insert(values.end(), x.begin(), x.end());
  labels.push_back(std::move(label));
}

TimeSeriesDataset TimeSeriesDataset::subset(std::span<const std::size_t> rows) const {
  TimeSeriesDataset out;
  out.name = name;
  out.length = length;
  out.values.reserve(rows.size() * length);
  for (auto r : rows) {
    auto s = series(r);
    out.values.insert(out.values.end(), s.begin(), s.end());
    if (labelled()) out.labels.push_back(labels[r]);
  }
  return out;
}

void validate(const TimeSeriesDataset& dataset) {
  if (dataset.length == 0 || dataset.values.empty())
    throw Error(ErrorCode::empty_input, "dataset is empty");
  if (dataset.length < kKernelLength)
    throw Error(ErrorCode::unsupported_length,
                "series length " + std::to_string(dataset.length) + " is shorter than 9");
  if (dataset.values.size() % dataset.length != 0)
    throw Error(ErrorCode::length_mismatch, "dataset values are not a whole number of series");
  if (dataset.labelled() && dataset.labels.size() != dataset.size())
    throw Error(ErrorCode::dimension_mismatch, "label count does not match series count");
  for (double v : dataset.values)
    if (!std::isfinite(v)) throw Error(ErrorCode::non_finite, "dataset contains a non-finite value");
}

void FeatureMatrix::append_rows(const FeatureMatrix& other) {
  if (rows == 0 && values.empty()) cols = other.cols;
  if (other.cols != cols)
    throw Error(ErrorCode::dimension_mismatch, "cannot stack matrices with different widths");
  values.insert(values.end(), other.values.begin(), other.values.end());
  rows += other.rows;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_fail(const std::string& name, std::size_t line, const std::string& what) {
  throw Error(ErrorCode::parse_error,
              (name.empty() ? std::string("input") : name) + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

TimeSeriesDataset parse_delimited(std::istream& in, char delimiter, bool has_labels,
                                  std::string name) {
  TimeSeriesDataset dataset;
  dataset.name = std::move(name);
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> row;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = line;
    // The tab delimiter also has to survive stripping of trailing whitespace.
    while (!rest.empty() && (rest.back() == '\r' || rest.back() == '\n' ||
                             (rest.back() == ' ' && delimiter != ' ')))
      rest.remove_suffix(1);
    if (trim(rest).empty()) continue;

    row.clear();
    std::string label;
    bool first = true;
    std::size_t column = 0;
    while (true) {
      const auto pos = rest.find(delimiter);
      const std::string_view token = trim(rest.substr(0, pos));
      ++column;
      if (first && has_labels) {
        if (token.empty()) parse_fail(dataset.name, line_no, "missing label");
        label.assign(token);
      } else {
        if (token.empty())
          parse_fail(dataset.name, line_no, "missing value in column " + std::to_string(column));
        double value = 0.0;
        const auto* begin = token.data();
        const auto* end = token.data() + token.size();
        const auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || ptr != end)
          parse_fail(dataset.name, line_no,
                     "non-numeric value '" + std::string(token) + "' in column " +
                         std::to_string(column));
        if (!std::isfinite(value))
          parse_fail(dataset.name, line_no,
                     "missing or non-finite value in column " + std::to_string(column));
        row.push_back(value);
      }
      first = false;
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }

    if (dataset.values.empty()) {
      if (row.empty()) parse_fail(dataset.name, line_no, "row has no values");
      dataset.length = row.size();
    } else if (row.size() != dataset.length) {
      parse_fail(dataset.name, line_no,
                 "ragged row: expected " + std::to_string(dataset.length) + " values, found " +
                     std::to_string(row.size()));
    }
    dataset.values.insert(dataset.values.end(), row.begin(), row.end());
    if (has_labels) dataset.labels.push_back(std::move(label));
  }

  if (dataset.values.empty()) throw Error(ErrorCode::empty_input, "no series found in " + dataset.name);
  if (dataset.length < kKernelLength)
    throw Error(ErrorCode::unsupported_length,
                dataset.name + ": series length " + std::to_string(dataset.length) +
                    " is shorter than the kernel length 9");
  return dataset;
}

TimeSeriesDataset load_delimited(const std::filesystem::path& path, char delimiter,
                                 bool has_labels) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  return parse_delimited(in, delimiter, has_labels, path.filename().string());
}

void write_delimited(const TimeSeriesDataset& dataset, std::ostream& out, char delimiter) {
  char buf[32];
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    bool first = true;
    if (dataset.labelled()) {
      out << dataset.labels[i];
      first = false;
    }
    for (double v : dataset.series(i)) {
      if (!first) out << delimiter;
      first = false;
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << buf;
    }
    out << '\n';
  }
}

void save_delimited(const TimeSeriesDataset& dataset, const std::filesystem::path& path,
                    char delimiter) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  write_delimited(dataset, out, delimiter);
  if (!out) throw Error(ErrorCode::io_error, "failed writing " + path.string());
}

TimeSeriesDataset synthesize(SyntheticKind kind, std::size_t n_per_class, std::size_t length,
                             double noise_sigma, std::uint64_t seed) {
  if (n_per_class == 0) throw Error(ErrorCode::invalid_argument, "n_per_class must be positive");
  if (length < kKernelLength)
    throw Error(ErrorCode::unsupported_length, "synthetic series must have length >= 9");
  if (noise_sigma < 0.0) throw Error(ErrorCode::invalid_argument, "noise_sigma must be >= 0");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, noise_sigma > 0.0 ? noise_sigma : 1.0);
  const double len = static_cast<double>(length);

  TimeSeriesDataset out;
  out.name = kind == SyntheticKind::sine_freq ? "sine_freq" : "noise_vs_trend";
  out.length = length;
  out.values.reserve(2 * n_per_class * length);
  for (int cls = 0; cls < 2; ++cls) {
    for (std::size_t n = 0; n < n_per_class; ++n) {
      for (std::size_t t = 0; t < length; ++t) {
        const double tt = static_cast<double>(t);
        double v = 0.0;
        if (kind == SyntheticKind::sine_freq)
          v = std::sin(2.0 * std::numbers::pi * (cls + 1) * tt / len);
        else if (cls == 1)
          v = -1.0 + 2.0 * tt / (len - 1.0);
        if (noise_sigma > 0.0) v += noise(rng);
        out.values.push_back(v);
      }
      out.labels.push_back(std::to_string(cls));
    }
  }
  return out;
}

std::pair<TimeSeriesDataset, TimeSeriesDataset> stratified_resample(
    const TimeSeriesDataset& dataset, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw Error(ErrorCode::invalid_argument, "train_fraction must lie strictly between 0 and 1");
  if (!dataset.labelled()) throw Error(ErrorCode::invalid_argument, "resampling needs labels");

  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < dataset.size(); ++i) by_class[dataset.labels[i]].push_back(i);

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> train_rows, test_rows;
  for (auto& [label, rows] : by_class) {
    if (rows.size() < 2)
      throw Error(ErrorCode::invalid_argument,
                  "class '" + label + "' has fewer than 2 examples and cannot be split");
    std::shuffle(rows.begin(), rows.end(), rng);
    auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(rows.size())));
    n_train = std::clamp<std::size_t>(n_train, 1, rows.size() - 1);
    train_rows.insert(train_rows.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_train));
    test_rows.insert(test_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_train), rows.end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return {dataset.subset(train_rows), dataset.subset(test_rows)};
}

void write_features_csv(const FeatureMatrix& features, std::span<const std::string> labels,
                        std::ostream& out) {
  if (!labels.empty() && labels.size() != features.rows)
    throw Error(ErrorCode::dimension_mismatch, "label count does not match feature rows");
  for (std::size_t j = 0; j < features.cols; ++j) out << 'f' << j << ',';
  out << "label\n";
  char buf[32];
  for (std::size_t i = 0; i < features.rows; ++i) {
    for (double v : features.row(i)) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << buf << ',';
    }
    if (!labels.empty()) out << labels[i];
    out << '\n';
  }
}

void save_features_csv(const FeatureMatrix& features, std::span<const std::string> labels,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  write_features_csv(features, labels, out);
}

}  // namespace minirocket
