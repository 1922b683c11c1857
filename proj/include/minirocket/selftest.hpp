#pragma once

#include <cstddef>
#include <cstdint>

namespace minirocket {

struct SelfTestOptions {
  std::size_t cases = 200;
  std::uint64_t seed = 0;
  std::size_t min_length = 16;
  std::size_t max_length = 512;
  std::size_t max_examples = 20;
  double tolerance = 1e-6;
  bool inject_parity_fault = false;
};

struct SelfTestReport {
  std::size_t cases = 0;
  std::size_t random_variant_cases = 0;
  std::size_t deterministic_cases = 0;
  std::size_t failing_cases = 0;
  double max_feature_deviation = 0.0;
  double max_bias_deviation = 0.0;
  double max_convolution_deviation = 0.0;

  bool passed(double tolerance) const noexcept {
    return cases > 0 && failing_cases == 0 && max_feature_deviation <= tolerance;
  }
};

/// Randomised comparison of the optimised fit/transform against the
/// reference implementation. Cases alternate between the two bias variants.
SelfTestReport run_selftest(const SelfTestOptions& options);

}  // namespace minirocket
