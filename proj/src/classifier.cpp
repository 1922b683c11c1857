#include "minirocket/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Dense>

#include "minirocket/error.hpp"
#include "linear_algebra.hpp"

namespace minirocket {

const char* to_string(ModelKind kind) noexcept {
  return kind == ModelKind::ridge ? "ridge" : "logistic";
}

namespace detail {

std::vector<std::string> class_labels_of(std::span<const std::string> labels) {
  std::vector<std::string> classes(labels.begin(), labels.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  return classes;
}

std::vector<std::size_t> encode_labels(std::span<const std::string> labels,
                                       std::span<const std::string> classes) {
  std::map<std::string_view, std::size_t> index;
  for (std::size_t c = 0; c < classes.size(); ++c) index.emplace(classes[c], c);
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (const auto& l : labels) {
    auto it = index.find(l);
    if (it == index.end()) throw Error(ErrorCode::invalid_argument, "unknown label '" + l + "'");
    out.push_back(it->second);
  }
  return out;
}

void fit_standardization(const FeatureMatrix& features, LinearModel& model) {
  const std::size_t n = features.rows, p = features.cols;
  model.feature_means.assign(p, 0.0);
  model.feature_scales.assign(p, 1.0);
  for (std::size_t j = 0; j < p; ++j) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = features(i, j);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    if (lo == hi) {
      // Constant column: exact centring, unit scale.
      model.feature_means[j] = lo;
      continue;
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (features(i, j) - mean) * (features(i, j) - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    model.feature_means[j] = mean;
    model.feature_scales[j] = sd > 0.0 ? sd : 1.0;
  }
}

Eigen::MatrixXd standardized(const FeatureMatrix& features, const LinearModel& model) {
  if (features.cols != model.num_features())
    throw Error(ErrorCode::dimension_mismatch,
                "feature matrix has " + std::to_string(features.cols) + " columns, model expects " +
                    std::to_string(model.num_features()));
  Eigen::MatrixXd z(features.rows, features.cols);
  for (std::size_t i = 0; i < features.rows; ++i)
    for (std::size_t j = 0; j < features.cols; ++j)
      z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (features(i, j) - model.feature_means[j]) / model.feature_scales[j];
  return z;
}

void check_finite(const FeatureMatrix& features) {
  for (double v : features.values)
    if (!std::isfinite(v)) throw Error(ErrorCode::non_finite, "feature matrix contains NaN or Inf");
}

}  // namespace detail

std::vector<double> default_ridge_grid() {
  std::vector<double> grid(10);
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = std::pow(10.0, -3.0 + 6.0 * static_cast<double>(i) / 9.0);
  return grid;
}

LinearModel ridge_fit(const FeatureMatrix& features, std::span<const std::string> labels) {
  const auto grid = default_ridge_grid();
  return ridge_fit(features, labels, grid);
}

LinearModel ridge_fit(const FeatureMatrix& features, std::span<const std::string> labels,
                      std::span<const double> reg_grid) {
  if (features.rows != labels.size())
    throw Error(ErrorCode::dimension_mismatch, "feature rows and label count differ");
  if (features.rows == 0 || features.cols == 0)
    throw Error(ErrorCode::empty_input, "cannot fit on an empty feature matrix");
  if (reg_grid.empty()) throw Error(ErrorCode::invalid_argument, "regularisation grid is empty");
  for (double l : reg_grid)
    if (!(l > 0.0)) throw Error(ErrorCode::invalid_argument, "penalties must be positive");
  detail::check_finite(features);

  LinearModel model;
  model.kind = ModelKind::ridge;
  model.class_labels = detail::class_labels_of(labels);
  if (model.num_classes() < 2)
    throw Error(ErrorCode::single_class, "ridge classifier needs at least two classes");
  const auto y_index = detail::encode_labels(labels, model.class_labels);
  detail::fit_standardization(features, model);

  const auto n = static_cast<Eigen::Index>(features.rows);
  const auto k = static_cast<Eigen::Index>(model.num_classes());
  const Eigen::MatrixXd z = detail::standardized(features, model);

  Eigen::MatrixXd y = Eigen::MatrixXd::Constant(n, k, -1.0);
  for (Eigen::Index i = 0; i < n; ++i) y(i, static_cast<Eigen::Index>(y_index[i])) = 1.0;
  const Eigen::RowVectorXd y_mean = y.colwise().mean();
  const Eigen::MatrixXd yc = y.rowwise() - y_mean;

  const auto basis = detail::spectral_basis(z);
  const Eigen::MatrixXd qty = basis.q.transpose() * yc;
  const Eigen::MatrixXd q_sq = basis.q.array().square().matrix();

  double best_error = std::numeric_limits<double>::infinity();
  double best_lambda = reg_grid.front();
  for (double lambda : reg_grid) {
    const Eigen::VectorXd shrink = (basis.eigenvalues.array() / (basis.eigenvalues.array() + lambda)).matrix();
    const Eigen::MatrixXd fitted = basis.q * (shrink.asDiagonal() * qty);
    // Intercept column contributes 1/n to every leverage.
    const Eigen::VectorXd leverage =
        (q_sq * shrink).array() + 1.0 / static_cast<double>(n);
    double error = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double denom = std::max(1.0 - leverage(i), 1e-12);
      for (Eigen::Index c = 0; c < k; ++c) {
        const double r = (yc(i, c) - fitted(i, c)) / denom;
        error += r * r;
      }
    }
    if (error < best_error) {
      best_error = error;
      best_lambda = lambda;
    }
  }

  const Eigen::VectorXd inv = (1.0 / (basis.eigenvalues.array() + best_lambda)).matrix();
  const Eigen::MatrixXd w = z.transpose() * (basis.q * (inv.asDiagonal() * qty));

  model.regularization = best_lambda;
  model.weights.resize(static_cast<std::size_t>(w.size()));
  for (Eigen::Index j = 0; j < w.rows(); ++j)
    for (Eigen::Index c = 0; c < k; ++c)
      model.weights[static_cast<std::size_t>(j * k + c)] = w(j, c);
  model.intercepts.assign(y_mean.data(), y_mean.data() + k);
  return model;
}

std::vector<double> decision_function(const LinearModel& model, const FeatureMatrix& features) {
  const Eigen::MatrixXd z = detail::standardized(features, model);
  const auto k = static_cast<Eigen::Index>(model.num_classes());
  if (model.weights.size() != model.num_features() * model.num_classes() ||
      model.intercepts.size() != model.num_classes())
    throw Error(ErrorCode::dimension_mismatch, "model weights have inconsistent shape");
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> w(
      model.weights.data(), static_cast<Eigen::Index>(model.num_features()), k);
  Eigen::Map<const Eigen::RowVectorXd> b(model.intercepts.data(), k);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> scores =
      (z * w).rowwise() + b;
  return {scores.data(), scores.data() + scores.size()};
}

std::vector<std::size_t> predict_indices(const LinearModel& model, const FeatureMatrix& features) {
  const auto scores = decision_function(model, features);
  const std::size_t k = model.num_classes();
  std::vector<std::size_t> out(features.rows);
  for (std::size_t i = 0; i < features.rows; ++i) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < k; ++c)
      if (scores[i * k + c] > scores[i * k + best]) best = c;
    out[i] = best;
  }
  return out;
}

std::vector<std::string> predict(const LinearModel& model, const FeatureMatrix& features) {
  const auto idx = predict_indices(model, features);
  std::vector<std::string> out;
  out.reserve(idx.size());
  for (auto c : idx) out.push_back(model.class_labels[c]);
  return out;
}

double accuracy(std::span<const std::string> predicted, std::span<const std::string> truth) {
  if (predicted.size() != truth.size())
    throw Error(ErrorCode::dimension_mismatch, "prediction and label counts differ");
  if (truth.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

ModelKind choose_classifier(std::size_t num_train) {
  return num_train <= 10000 ? ModelKind::ridge : ModelKind::logistic;
}

}  // namespace minirocket
