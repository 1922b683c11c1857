#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "linear_algebra.hpp"
#include "minirocket/classifier.hpp"
#include "minirocket/error.hpp"

namespace minirocket {

void TrainingSchedule::validate() const {
  if (validation_size == 0 || minibatch == 0 || transform_batch == 0 || max_epochs == 0 ||
      lr_halving_patience == 0 || stopping_patience == 0 || !(initial_lr > 0.0))
    throw Error(ErrorCode::invalid_argument, "training schedule values must all be positive");
  if (stopping_patience < lr_halving_patience)
    throw Error(ErrorCode::invalid_argument,
                "stopping patience must be at least the learning-rate halving patience");
}

PlateauSchedule::PlateauSchedule(double initial_lr, std::size_t halving_patience,
                                 std::size_t stopping_patience)
    : lr_(initial_lr),
      best_(std::numeric_limits<double>::infinity()),
      halving_patience_(halving_patience),
      stopping_patience_(stopping_patience) {}

PlateauSchedule::Event PlateauSchedule::observe(double validation_loss) {
  if (validation_loss < best_) {
    best_ = validation_loss;
    stale_ = 0;
    return Event::improved;
  }
  ++stale_;
  if (stale_ >= stopping_patience_) return Event::stop;
  if (stale_ % halving_patience_ == 0) {
    lr_ *= 0.5;
    return Event::lr_halved;
  }
  return Event::none;
}

namespace {

using Matrix = Eigen::MatrixXd;
// Minibatches are row slices, so the cached features are stored by row.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Row-wise softmax probabilities, in place on the logits.
void softmax_rows(Matrix& logits) {
  const Eigen::VectorXd m = logits.rowwise().maxCoeff();
  logits = (logits.colwise() - m).array().exp().matrix();
  const Eigen::VectorXd total = logits.rowwise().sum();
  logits.array().colwise() /= total.array();
}

double cross_entropy(const RowMatrix& z, const Matrix& w, const Eigen::RowVectorXd& b,
                     std::span<const std::size_t> y) {
  const Matrix logits = (z * w).rowwise() + b;
  const Eigen::VectorXd m = logits.rowwise().maxCoeff();
  const Eigen::VectorXd lse =
      m.array() + (logits.colwise() - m).array().exp().rowwise().sum().log();
  double loss = lse.sum();
  for (Eigen::Index i = 0; i < logits.rows(); ++i)
    loss -= logits(i, static_cast<Eigen::Index>(y[static_cast<std::size_t>(i)]));
  return loss / static_cast<double>(logits.rows());
}

FeatureMatrix transform_in_batches(const BatchTransform& transform_fn,
                                   const TimeSeriesDataset& data, std::span<const std::size_t> rows,
                                   std::size_t batch) {
  FeatureMatrix out;
  for (std::size_t start = 0; start < rows.size(); start += batch) {
    const auto count = std::min(batch, rows.size() - start);
    const auto block = data.subset(rows.subspan(start, count));
    auto features = transform_fn(block);
    if (features.rows != count)
      throw Error(ErrorCode::dimension_mismatch, "transform returned the wrong number of rows");
    out.append_rows(features);
  }
  return out;
}

}  // namespace

LogisticFitResult logistic_fit(const BatchTransform& transform_fn, const TimeSeriesDataset& train,
                               const TrainingSchedule& schedule, std::uint64_t seed) {
  schedule.validate();
  if (!train.labelled()) throw Error(ErrorCode::invalid_argument, "training set has no labels");
  if (train.size() <= schedule.validation_size)
    throw Error(ErrorCode::invalid_argument,
                "logistic regression needs more than " + std::to_string(schedule.validation_size) +
                    " training examples; use the ridge classifier for smaller sets");

  LogisticFitResult result;
  auto& model = result.model;
  auto& log = result.log;
  model.kind = ModelKind::logistic;
  model.class_labels = detail::class_labels_of(train.labels);
  if (model.num_classes() < 2)
    throw Error(ErrorCode::single_class, "logistic regression needs at least two classes");

  // Shuffle once; the first block is held out for validation.
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const std::span<const std::size_t> all(order);
  const auto val_rows = all.first(schedule.validation_size);
  const auto fit_rows = all.subspan(schedule.validation_size);

  // Cached so later epochs never repeat the transform.
  const auto val_features = transform_in_batches(transform_fn, train, val_rows, schedule.transform_batch);
  const auto fit_features = transform_in_batches(transform_fn, train, fit_rows, schedule.transform_batch);
  detail::check_finite(fit_features);
  detail::fit_standardization(fit_features, model);

  std::vector<std::string> val_labels, fit_labels;
  for (auto r : val_rows) val_labels.push_back(train.labels[r]);
  for (auto r : fit_rows) fit_labels.push_back(train.labels[r]);
  const auto y_val = detail::encode_labels(val_labels, model.class_labels);
  const auto y_fit = detail::encode_labels(fit_labels, model.class_labels);

  const RowMatrix z_val = detail::standardized(val_features, model);
  const RowMatrix z_fit = detail::standardized(fit_features, model);

  const auto p = static_cast<Eigen::Index>(model.num_features());
  const auto k = static_cast<Eigen::Index>(model.num_classes());
  Matrix w = Matrix::Zero(p, k), m_w = w, v_w = w, best_w = w;
  Eigen::RowVectorXd b = Eigen::RowVectorXd::Zero(k), m_b = b, v_b = b, best_b = b;

  PlateauSchedule plateau(schedule.initial_lr, schedule.lr_halving_patience,
                          schedule.stopping_patience);
  const auto n_fit = static_cast<Eigen::Index>(fit_rows.size());
  const auto mb = static_cast<Eigen::Index>(schedule.minibatch);
  double beta1_t = 1.0, beta2_t = 1.0;
  bool stop = false;

  for (std::size_t epoch = 0; epoch < schedule.max_epochs && !stop; ++epoch) {
    ++log.epochs;
    for (Eigen::Index start = 0; start < n_fit && !stop; start += mb) {
      const auto rows = std::min(mb, n_fit - start);
      const auto zb = z_fit.middleRows(start, rows);
      Matrix grad = (zb * w).rowwise() + b;
      softmax_rows(grad);
      for (Eigen::Index i = 0; i < rows; ++i)
        grad(i, static_cast<Eigen::Index>(y_fit[static_cast<std::size_t>(start + i)])) -= 1.0;
      grad /= static_cast<double>(rows);
      const Matrix g_w = zb.transpose() * grad;
      const Eigen::RowVectorXd g_b = grad.colwise().sum();

      beta1_t *= schedule.beta1;
      beta2_t *= schedule.beta2;
      const double lr = plateau.learning_rate();
      m_w = schedule.beta1 * m_w + (1.0 - schedule.beta1) * g_w;
      v_w = schedule.beta2 * v_w + (1.0 - schedule.beta2) * g_w.cwiseProduct(g_w);
      m_b = schedule.beta1 * m_b + (1.0 - schedule.beta1) * g_b;
      v_b = schedule.beta2 * v_b + (1.0 - schedule.beta2) * g_b.cwiseProduct(g_b);
      w.array() -= lr * (m_w.array() / (1.0 - beta1_t)) /
                   ((v_w.array() / (1.0 - beta2_t)).sqrt() + schedule.epsilon);
      b.array() -= lr * (m_b.array() / (1.0 - beta1_t)) /
                   ((v_b.array() / (1.0 - beta2_t)).sqrt() + schedule.epsilon);
      ++log.updates;

      const double val_loss = cross_entropy(z_val, w, b, y_val);
      switch (plateau.observe(val_loss)) {
        case PlateauSchedule::Event::improved:
          best_w = w;
          best_b = b;
          log.improvements.push_back(val_loss);
          break;
        case PlateauSchedule::Event::lr_halved:
          ++log.lr_halvings;
          break;
        case PlateauSchedule::Event::stop:
          log.early_stopped = true;
          stop = true;
          break;
        case PlateauSchedule::Event::none:
          break;
      }
    }
  }

  log.best_validation_loss = plateau.best_loss();
  log.final_learning_rate = plateau.learning_rate();
  model.weights.resize(static_cast<std::size_t>(p * k));
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index c = 0; c < k; ++c) model.weights[static_cast<std::size_t>(j * k + c)] = best_w(j, c);
  model.intercepts.assign(best_b.data(), best_b.data() + k);
  return result;
}

}  // namespace minirocket
