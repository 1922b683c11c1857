#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "minirocket/types.hpp"

namespace minirocket {

enum class ModelKind { ridge, logistic };

const char* to_string(ModelKind kind) noexcept;

/// Linear scores over standardised features; prediction is the argmax.
struct LinearModel {
  ModelKind kind = ModelKind::ridge;
  std::vector<std::string> class_labels;
  std::vector<double> feature_means;
  std::vector<double> feature_scales;  // > 0, 1 for constant columns
  std::vector<double> weights;         // num_features x num_classes, row-major
  std::vector<double> intercepts;      // num_classes
  double regularization = 0.0;         // chosen ridge penalty (ridge only)

  std::size_t num_features() const noexcept { return feature_means.size(); }
  std::size_t num_classes() const noexcept { return class_labels.size(); }
};

/// Ten log-spaced penalties from 1e-3 to 1e3.
std::vector<double> default_ridge_grid();

/// One-vs-all ridge on +/-1 targets with the penalty picked by exact
/// leave-one-out squared error from a single eigendecomposition.
LinearModel ridge_fit(const FeatureMatrix& features, std::span<const std::string> labels,
                      std::span<const double> reg_grid);
LinearModel ridge_fit(const FeatureMatrix& features, std::span<const std::string> labels);

/// Raw class scores, rows x classes.
std::vector<double> decision_function(const LinearModel& model, const FeatureMatrix& features);

/// Argmax label per row; ties go to the lowest class index.
std::vector<std::string> predict(const LinearModel& model, const FeatureMatrix& features);
std::vector<std::size_t> predict_indices(const LinearModel& model, const FeatureMatrix& features);

double accuracy(std::span<const std::string> predicted, std::span<const std::string> truth);

/// ridge up to 10,000 training examples, logistic above.
ModelKind choose_classifier(std::size_t num_train);

struct TrainingSchedule {
  std::size_t validation_size = 2048;
  std::size_t minibatch = 256;
  double initial_lr = 1e-4;
  std::size_t lr_halving_patience = 50;
  std::size_t stopping_patience = 100;
  std::size_t transform_batch = 4096;
  std::size_t max_epochs = 1000;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

/// Tracks validation loss per update. Halves the learning rate every
/// `lr_halving_patience` consecutive non-improving updates and requests a
/// stop after `stopping_patience` of them.
class PlateauSchedule {
 public:
  enum class Event { improved, none, lr_halved, stop };

  PlateauSchedule(double initial_lr, std::size_t halving_patience, std::size_t stopping_patience);

  Event observe(double validation_loss);

  double learning_rate() const noexcept { return lr_; }
  double best_loss() const noexcept { return best_; }
  std::size_t updates_since_improvement() const noexcept { return stale_; }

 private:
  double lr_;
  double best_;
  std::size_t stale_ = 0;
  std::size_t halving_patience_;
  std::size_t stopping_patience_;
};

struct LogisticTrainingLog {
  std::size_t updates = 0;
  std::size_t epochs = 0;
  std::size_t lr_halvings = 0;
  std::size_t validation_interval = 1;  // updates between validation evaluations
  bool early_stopped = false;
  double best_validation_loss = 0.0;
  double final_learning_rate = 0.0;
  std::vector<double> improvements;  // validation loss at each improvement event
};

struct LogisticFitResult {
  LinearModel model;
  LogisticTrainingLog log;
};

using BatchTransform = std::function<FeatureMatrix(const TimeSeriesDataset&)>;

/// Softmax regression trained with Adam: shuffles once, holds out the
/// validation block, transforms the rest in cached batches and keeps the
/// weights with the best validation loss.
LogisticFitResult logistic_fit(const BatchTransform& transform_fn, const TimeSeriesDataset& train,
                               const TrainingSchedule& schedule, std::uint64_t seed);

void write_model(const LinearModel& model, std::ostream& out);
LinearModel read_model(std::istream& in);
void save_model(const LinearModel& model, const std::filesystem::path& path);
LinearModel load_model(const std::filesystem::path& path);

}  // namespace minirocket
