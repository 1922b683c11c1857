#include <fstream>

#include <json.hpp>

#include "minirocket/classifier.hpp"
#include "minirocket/error.hpp"

namespace minirocket {

namespace {
constexpr const char* kModelFormat = "minirocket-linear-model";
constexpr int kModelVersion = 1;
}  // namespace

void write_model(const LinearModel& model, std::ostream& out) {
  nlohmann::json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["kind"] = to_string(model.kind);
  j["class_labels"] = model.class_labels;
  j["feature_means"] = model.feature_means;
  j["feature_scales"] = model.feature_scales;
  j["weights"] = model.weights;
  j["intercepts"] = model.intercepts;
  j["regularization"] = model.regularization;
  out << j.dump() << '\n';
  if (!out) throw Error(ErrorCode::io_error, "failed writing model");
}

LinearModel read_model(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::format_error, std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kModelFormat)
      throw Error(ErrorCode::format_error, "not a model file");
    if (j.at("version").get<int>() != kModelVersion)
      throw Error(ErrorCode::format_error, "unsupported model file version");
    LinearModel model;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "ridge")
      model.kind = ModelKind::ridge;
    else if (kind == "logistic")
      model.kind = ModelKind::logistic;
    else
      throw Error(ErrorCode::format_error, "unknown model kind '" + kind + "'");
    model.class_labels = j.at("class_labels").get<std::vector<std::string>>();
    model.feature_means = j.at("feature_means").get<std::vector<double>>();
    model.feature_scales = j.at("feature_scales").get<std::vector<double>>();
    model.weights = j.at("weights").get<std::vector<double>>();
    model.intercepts = j.at("intercepts").get<std::vector<double>>();
    model.regularization = j.at("regularization").get<double>();
    if (model.feature_scales.size() != model.num_features() ||
        model.weights.size() != model.num_features() * model.num_classes() ||
        model.intercepts.size() != model.num_classes())
      throw Error(ErrorCode::format_error, "model arrays have inconsistent sizes");
    for (double s : model.feature_scales)
      if (!(s > 0.0)) throw Error(ErrorCode::format_error, "feature scales must be positive");
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::format_error, std::string("malformed model file: ") + e.what());
  }
}

void save_model(const LinearModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  write_model(model, out);
}

LinearModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  return read_model(in);
}

}  // namespace minirocket
