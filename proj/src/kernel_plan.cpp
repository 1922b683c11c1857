#include "minirocket/kernel_plan.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "minirocket/error.hpp"

namespace minirocket {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::invalid_kernel: return "invalid kernel";
    case ErrorCode::unsupported_length: return "unsupported length";
    case ErrorCode::empty_input: return "empty input";
    case ErrorCode::length_mismatch: return "length mismatch";
    case ErrorCode::layout_mismatch: return "layout mismatch";
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::single_class: return "single class";
    case ErrorCode::non_finite: return "non-finite value";
    case ErrorCode::parse_error: return "parse error";
    case ErrorCode::io_error: return "I/O error";
    case ErrorCode::format_error: return "format error";
  }
  return "unknown error";
}

namespace {
constexpr KernelIndexSet kIndices = generate_kernel_indices();
static_assert(kIndices.front() == KernelTriple{0, 1, 2});
static_assert(kIndices.back() == KernelTriple{6, 7, 8});
}  // namespace

const KernelIndexSet& kernel_indices() noexcept { return kIndices; }

Kernel kernel_weights(const KernelTriple& triple) {
  for (std::size_t i = 0; i < 3; ++i) {
    if (triple[i] >= kKernelLength || (i > 0 && triple[i] <= triple[i - 1]))
      throw Error(ErrorCode::invalid_kernel,
                  "kernel triple must be strictly increasing within 0..8");
  }
  Kernel k;
  k.beta_indices = triple;
  k.weights.fill(kAlpha);
  for (auto idx : triple) k.weights[idx] = kBeta;
  return k;
}

std::size_t DilationPlan::features_per_kernel() const noexcept {
  return std::accumulate(features_per_dilation.begin(), features_per_dilation.end(),
                         std::size_t{0});
}

std::size_t DilationPlan::total_features() const noexcept {
  return kNumKernels * features_per_kernel();
}

std::size_t DilationPlan::dilation_offset(std::size_t j) const noexcept {
  std::size_t offset = 0;
  for (std::size_t i = 0; i < j; ++i) offset += kNumKernels * features_per_dilation[i];
  return offset;
}

DilationPlan plan_dilations(std::size_t input_length, std::size_t num_features,
                            std::size_t max_dilations_per_kernel) {
  if (input_length < kKernelLength)
    throw Error(ErrorCode::unsupported_length,
                "series length " + std::to_string(input_length) +
                    " is shorter than the kernel length 9");
  if (num_features < kNumKernels)
    throw Error(ErrorCode::invalid_argument, "num_features must be at least 84");
  if (max_dilations_per_kernel == 0)
    throw Error(ErrorCode::invalid_argument, "max_dilations_per_kernel must be positive");

  DilationPlan plan;
  plan.input_length = input_length;
  plan.num_features = num_features;
  plan.max_dilations_per_kernel = max_dilations_per_kernel;
  plan.max_exponent =
      std::log2(static_cast<double>(input_length - 1) / static_cast<double>(kKernelLength - 1));

  const std::size_t per_kernel = num_features / kNumKernels;
  const std::size_t grid = std::min(per_kernel, max_dilations_per_kernel);

  // Grid points are non-decreasing, so unique values come out in runs.
  std::vector<std::size_t> counts;
  for (std::size_t i = 0; i < grid; ++i) {
    const double exponent =
        grid == 1 ? 0.0 : static_cast<double>(i) * plan.max_exponent / static_cast<double>(grid - 1);
    auto d = static_cast<std::size_t>(std::floor(std::exp2(exponent)));
    // Guard against exp2(log2(x)) rounding a hair above an exact integer bound.
    while (d > 1 && (kKernelLength - 1) * d > input_length - 1) --d;
    if (!plan.dilations.empty() && plan.dilations.back() == d) {
      ++counts.back();
    } else {
      plan.dilations.push_back(d);
      counts.push_back(1);
    }
  }

  std::size_t assigned = 0;
  plan.features_per_dilation.reserve(counts.size());
  for (auto c : counts) {
    plan.features_per_dilation.push_back(c * per_kernel / grid);
    assigned += plan.features_per_dilation.back();
  }
  // Each floor loses less than one, so the remainder is below the number of dilations.
  for (std::size_t j = 0; assigned < per_kernel; ++j, ++assigned) ++plan.features_per_dilation[j];

  return plan;
}

std::vector<double> quantile_sequence(std::size_t count) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<double> q(count);
  for (std::size_t i = 0; i < count; ++i) q[i] = std::fmod(static_cast<double>(i + 1) * phi, 1.0);
  return q;
}

std::size_t total_num_features(std::size_t num_features) {
  if (num_features < kNumKernels)
    throw Error(ErrorCode::invalid_argument, "num_features must be at least 84");
  return kNumKernels * (num_features / kNumKernels);
}

}  // namespace minirocket
