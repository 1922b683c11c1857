#include <omp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "minirocket/benchmark.hpp"
#include "minirocket/bias_fit.hpp"
#include "minirocket/classifier.hpp"
#include "minirocket/data_io.hpp"
#include "minirocket/error.hpp"
#include "minirocket/fast_transform.hpp"
#include "minirocket/selftest.hpp"

namespace mr = minirocket;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInternal = 2;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int default_threads() {
  if (const char* env = std::getenv("MINIROCKET_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid MINIROCKET_THREADS='" << env << "'\n";
  }
  return 1;
}

char delimiter_char(const std::string& name) {
  if (name == "tab" || name == "\\t" || name == "\t") return '\t';
  if (name == "comma" || name == ",") return ',';
  if (name.size() == 1) return name[0];
  throw mr::Error(mr::ErrorCode::invalid_argument, "unsupported delimiter '" + name + "'");
}

void print_plan(const mr::DilationPlan& plan, std::ostream& out) {
  out << "dilation  features_per_kernel\n";
  for (std::size_t j = 0; j < plan.num_dilations(); ++j) {
    char line[64];
    std::snprintf(line, sizeof line, "%8zu  %19zu\n", plan.dilations[j], plan.features_per_dilation[j]);
    out << line;
  }
  out << "dilations: " << plan.num_dilations() << "\n";
  out << "features per kernel: " << plan.features_per_kernel() << "\n";
  out << "total features: " << plan.total_features() << "\n";
  if (plan.num_dilations() == 1 && plan.features_per_kernel() == 1)
    out << "note: one feature per kernel, using dilation 1 only\n";
}

struct Common {
  int threads = default_threads();
  std::string delimiter = "tab";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--threads", c.threads, "worker threads (default: MINIROCKET_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--delimiter", c.delimiter, "field delimiter: tab or comma");
}

// fit ---------------------------------------------------------------------

struct FitArgs {
  std::string train, out;
  std::size_t num_features = mr::kDefaultNumFeatures;
  std::size_t max_dilations = mr::kDefaultMaxDilations;
  std::uint64_t seed = 0;
  bool deterministic = false;
  CLI::Option* seed_opt = nullptr;
};

int cmd_fit(const FitArgs& a, const Common& c) {
  if (a.deterministic && a.seed_opt->count() > 0)
    throw mr::Error(mr::ErrorCode::invalid_argument,
                    "--seed contradicts --deterministic (the deterministic variant uses no seed)");
  const auto train = mr::load_delimited(a.train, delimiter_char(c.delimiter));
  const auto start = Clock::now();
  const auto params = mr::fit(train, a.num_features, a.max_dilations,
                              a.deterministic ? mr::BiasVariant::deterministic
                                              : mr::BiasVariant::random_example,
                              a.seed);
  const double elapsed = seconds_since(start);
  mr::save_parameters(params, a.out);
  print_plan(params.plan, std::cout);
  std::cout << "variant: " << (a.deterministic ? "deterministic" : "random-example");
  if (params.seed) std::cout << " (seed " << *params.seed << ")";
  std::cout << "\nfit seconds: " << elapsed << "\nwrote " << a.out << "\n";
  return kExitOk;
}

// transform ---------------------------------------------------------------

struct TransformArgs {
  std::string params, data, out;
};

int cmd_transform(const TransformArgs& a, const Common& c) {
  const auto params = mr::load_parameters(a.params);
  const auto data = mr::load_delimited(a.data, delimiter_char(c.delimiter), true);
  const auto start = Clock::now();
  const auto features = mr::transform(data, params);
  const double elapsed = seconds_since(start);
  mr::save_features_csv(features, data.labels, a.out);
  std::cout << "rows: " << features.rows << "\ncolumns: " << features.cols
            << "\ntransform seconds: " << elapsed << "\nwrote " << a.out << "\n";
  return kExitOk;
}

// train -------------------------------------------------------------------

struct TrainArgs {
  std::string params, train, model_out, classifier = "auto";
  std::uint64_t seed = 0;
};

int cmd_train(const TrainArgs& a, const Common& c) {
  const auto params = mr::load_parameters(a.params);
  const auto train = mr::load_delimited(a.train, delimiter_char(c.delimiter));
  if (!train.labelled()) throw mr::Error(mr::ErrorCode::invalid_argument, "training data has no labels");

  mr::ModelKind kind = a.classifier == "ridge"      ? mr::ModelKind::ridge
                       : a.classifier == "logistic" ? mr::ModelKind::logistic
                                                    : mr::choose_classifier(train.size());
  std::cout << "classifier: " << mr::to_string(kind) << (a.classifier == "auto" ? " (auto)" : "")
            << "\nexamples: " << train.size() << "\n";

  mr::LinearModel model;
  double transform_s = 0.0, classifier_s = 0.0;
  if (kind == mr::ModelKind::ridge) {
    auto start = Clock::now();
    const auto features = mr::transform(train, params);
    transform_s = seconds_since(start);
    start = Clock::now();
    model = mr::ridge_fit(features, train.labels);
    classifier_s = seconds_since(start);
    std::cout << "regularization: " << model.regularization << "\n";
  } else {
    const auto transform_fn = [&](const mr::TimeSeriesDataset& block) {
      const auto t0 = Clock::now();
      auto f = mr::transform(block, params);
      transform_s += seconds_since(t0);
      return f;
    };
    const auto start = Clock::now();
    auto result = mr::logistic_fit(transform_fn, train, mr::TrainingSchedule{}, a.seed);
    classifier_s = seconds_since(start) - transform_s;
    model = std::move(result.model);
    std::cout << "updates: " << result.log.updates << "\nepochs: " << result.log.epochs
              << "\nlr halvings: " << result.log.lr_halvings
              << "\nearly stopped: " << (result.log.early_stopped ? "yes" : "no")
              << "\nbest validation loss: " << result.log.best_validation_loss << "\n";
  }
  mr::save_model(model, a.model_out);

  // Training accuracy is reported separately from the timed section.
  const auto train_acc = mr::accuracy(mr::predict(model, mr::transform(train, params)), train.labels);
  std::cout << "transform seconds: " << transform_s << "\nclassifier seconds: " << classifier_s
            << "\ntraining accuracy: " << train_acc << "\nwrote " << a.model_out << "\n";
  return kExitOk;
}

// predict -----------------------------------------------------------------

struct PredictArgs {
  std::string params, model, data, out;
  bool unlabelled = false;
};

int cmd_predict(const PredictArgs& a, const Common& c) {
  const auto params = mr::load_parameters(a.params);
  const auto model = mr::load_model(a.model);
  if (model.num_features() != params.num_features())
    throw mr::Error(mr::ErrorCode::dimension_mismatch,
                    "model expects " + std::to_string(model.num_features()) +
                        " features but the parameters produce " + std::to_string(params.num_features()));
  const auto data = mr::load_delimited(a.data, delimiter_char(c.delimiter), !a.unlabelled);
  const auto predicted = mr::predict(model, mr::transform(data, params));

  if (!a.out.empty() || !data.labelled()) {
    std::ofstream file;
    if (!a.out.empty()) {
      file.open(a.out);
      if (!file) throw mr::Error(mr::ErrorCode::io_error, "cannot write " + a.out);
    }
    std::ostream& out = a.out.empty() ? std::cout : file;
    out << "row,predicted\n";
    for (std::size_t i = 0; i < predicted.size(); ++i) out << i << ',' << predicted[i] << '\n';
  }
  if (data.labelled()) std::cout << "accuracy: " << mr::accuracy(predicted, data.labels) << "\n";
  return kExitOk;
}

// selftest ----------------------------------------------------------------

struct SelfTestArgs {
  mr::SelfTestOptions options;
};

int cmd_selftest(const SelfTestArgs& a) {
  const auto start = Clock::now();
  const auto r = mr::run_selftest(a.options);
  std::cout << "cases: " << r.cases << " (random-example " << r.random_variant_cases
            << ", deterministic " << r.deterministic_cases << ")\n"
            << "failing cases: " << r.failing_cases << "\n"
            << "max feature deviation: " << r.max_feature_deviation << "\n"
            << "max bias deviation: " << r.max_bias_deviation << "\n"
            << "max convolution deviation: " << r.max_convolution_deviation << "\n"
            << "seconds: " << seconds_since(start) << "\n";
  const bool ok = r.passed(a.options.tolerance);
  std::cout << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kExitOk : kExitUsage;
}

// bench -------------------------------------------------------------------

struct BenchArgs {
  mr::BenchOptions options;
  std::string out;
  bool no_naive = false;
  bool check = false;
};

int cmd_bench(BenchArgs a) {
  a.options.include_naive = !a.no_naive;
  const auto rows = mr::run_benchmark(a.options);
  mr::write_bench_csv(rows, std::cout);
  if (!a.out.empty()) {
    std::ofstream file(a.out);
    if (!file) throw mr::Error(mr::ErrorCode::io_error, "cannot write " + a.out);
    mr::write_bench_csv(rows, file);
  }
  bool all_ok = true;
  for (const auto& s : mr::check_linear_scaling(rows)) {
    std::cout << "scaling " << s.dimension << " " << s.from << "->" << s.to << " (other " << s.fixed
              << "): ratio " << s.ratio << (s.within_bounds ? " ok" : " OUT OF [1.4, 2.6]") << "\n";
    all_ok = all_ok && s.within_bounds;
  }
  return a.check && !all_ok ? kExitUsage : kExitOk;
}

// synth -------------------------------------------------------------------

struct SynthArgs {
  std::string kind = "sine", out, test_out;
  std::size_t n_per_class = 50, length = 128;
  double noise = 0.2, train_fraction = 0.5;
  std::uint64_t seed = 0;
};

int cmd_synth(const SynthArgs& a, const Common& c) {
  const auto kind = a.kind == "trend" ? mr::SyntheticKind::noise_vs_trend : mr::SyntheticKind::sine_freq;
  const auto data = mr::synthesize(kind, a.n_per_class, a.length, a.noise, a.seed);
  const char delim = delimiter_char(c.delimiter);
  if (a.test_out.empty()) {
    mr::save_delimited(data, a.out, delim);
    std::cout << "wrote " << data.size() << " series to " << a.out << "\n";
  } else {
    const auto [train, test] = mr::stratified_resample(data, a.train_fraction, a.seed);
    mr::save_delimited(train, a.out, delim);
    mr::save_delimited(test, a.test_out, delim);
    std::cout << "wrote " << train.size() << " training series to " << a.out << " and "
              << test.size() << " test series to " << a.test_out << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MiniRocket time series classification"};
  app.require_subcommand(1);
  Common common;

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "fit transform parameters to a training set");
  fit->add_option("train", fit_args.train, "training data file")->required()->check(CLI::ExistingFile);
  fit->add_option("-o,--out", fit_args.out, "parameter file to write")->required();
  fit->add_option("--num-features", fit_args.num_features, "requested feature count");
  fit->add_option("--max-dilations", fit_args.max_dilations, "maximum dilations per kernel");
  fit_args.seed_opt = fit->add_option("--seed", fit_args.seed, "seed for example selection");
  fit->add_flag("--deterministic", fit_args.deterministic,
                "fit biases on the whole training set (no seed)");
  add_common(fit, common);

  TransformArgs tr_args;
  auto* tr = app.add_subcommand("transform", "write the feature matrix of a dataset as CSV");
  tr->add_option("--params", tr_args.params, "parameter file")->required()->check(CLI::ExistingFile);
  tr->add_option("data", tr_args.data, "dataset file")->required()->check(CLI::ExistingFile);
  tr->add_option("-o,--out", tr_args.out, "feature CSV to write")->required();
  add_common(tr, common);

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "transform a training set and fit a classifier");
  train->add_option("--params", train_args.params, "parameter file")->required()->check(CLI::ExistingFile);
  train->add_option("train", train_args.train, "training data file")->required()->check(CLI::ExistingFile);
  train->add_option("--model-out", train_args.model_out, "model file to write")->required();
  train->add_option("--classifier", train_args.classifier, "auto, ridge or logistic")
      ->check(CLI::IsMember({"auto", "ridge", "logistic"}));
  train->add_option("--seed", train_args.seed, "shuffle seed for logistic regression");
  add_common(train, common);

  PredictArgs pred_args;
  auto* pred = app.add_subcommand("predict", "predict labels and report accuracy");
  pred->add_option("--params", pred_args.params, "parameter file")->required()->check(CLI::ExistingFile);
  pred->add_option("--model", pred_args.model, "model file")->required()->check(CLI::ExistingFile);
  pred->add_option("data", pred_args.data, "dataset file")->required()->check(CLI::ExistingFile);
  pred->add_option("-o,--out", pred_args.out, "predictions CSV (default: stdout when unlabelled)");
  pred->add_flag("--unlabelled", pred_args.unlabelled, "data rows carry no label column");
  add_common(pred, common);

  SelfTestArgs st_args;
  auto* st = app.add_subcommand("selftest", "compare the optimised code with the reference on random cases");
  st->add_option("--cases", st_args.options.cases, "number of random cases")->check(CLI::PositiveNumber);
  st->add_option("--seed", st_args.options.seed, "case generator seed");
  st->add_option("--tolerance", st_args.options.tolerance, "max allowed feature deviation");
#ifdef MINIROCKET_FAULT_INJECTION
  st->add_flag("--inject-parity-fault", st_args.options.inject_parity_fault)->group("");
#endif
  add_common(st, common);

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "time the optimised and reference transforms");
  bench->add_option("--lengths", bench_args.options.lengths, "series lengths")->delimiter(',');
  bench->add_option("--examples", bench_args.options.examples, "example counts")->delimiter(',');
  bench->add_option("--repeats", bench_args.options.repeats, "repeats per cell (median reported)")
      ->check(CLI::PositiveNumber);
  bench->add_option("--num-features", bench_args.options.num_features, "requested feature count");
  bench->add_option("--seed", bench_args.options.seed, "data seed");
  bench->add_option("-o,--out", bench_args.out, "CSV file to write");
  bench->add_flag("--no-naive", bench_args.no_naive, "skip the reference transform");
  bench->add_flag("--check-scaling", bench_args.check, "exit 1 if a scaling ratio is out of bounds");
  add_common(bench, common);

  SynthArgs syn_args;
  auto* syn = app.add_subcommand("synth", "write a synthetic two-class dataset");
  syn->add_option("--kind", syn_args.kind, "sine or trend")->check(CLI::IsMember({"sine", "trend"}));
  syn->add_option("--n-per-class", syn_args.n_per_class, "series per class")->check(CLI::PositiveNumber);
  syn->add_option("--length", syn_args.length, "series length");
  syn->add_option("--noise", syn_args.noise, "Gaussian noise standard deviation");
  syn->add_option("--seed", syn_args.seed, "generator seed");
  syn->add_option("-o,--out", syn_args.out, "dataset file (training part if --test-out is set)")->required();
  syn->add_option("--test-out", syn_args.test_out, "write a stratified test split here");
  syn->add_option("--train-fraction", syn_args.train_fraction, "training share for the split");
  add_common(syn, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    omp_set_num_threads(common.threads);
    if (fit->parsed()) return cmd_fit(fit_args, common);
    if (tr->parsed()) return cmd_transform(tr_args, common);
    if (train->parsed()) return cmd_train(train_args, common);
    if (pred->parsed()) return cmd_predict(pred_args, common);
    if (st->parsed()) return cmd_selftest(st_args);
    if (bench->parsed()) return cmd_bench(bench_args);
    if (syn->parsed()) return cmd_synth(syn_args, common);
  } catch (const mr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
