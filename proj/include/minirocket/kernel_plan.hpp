#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace minirocket {

inline constexpr std::size_t kKernelLength = 9;
inline constexpr std::size_t kNumKernels = 84;  // C(9, 3)
inline constexpr std::size_t kDefaultNumFeatures = 9996;
inline constexpr std::size_t kDefaultMaxDilations = 32;

inline constexpr double kAlpha = -1.0;
inline constexpr double kBeta = 2.0;
inline constexpr double kGamma = kBeta - kAlpha;  // 3

/// Positions of the three beta weights within a length-9 kernel.
using KernelTriple = std::array<std::uint8_t, 3>;

/// All 3-combinations of {0..8} in lexicographic order.
using KernelIndexSet = std::array<KernelTriple, kNumKernels>;

constexpr KernelIndexSet generate_kernel_indices() {
  KernelIndexSet out{};
  std::size_t n = 0;
  for (std::uint8_t a = 0; a < kKernelLength; ++a)
    for (std::uint8_t b = a + 1; b < kKernelLength; ++b)
      for (std::uint8_t c = b + 1; c < kKernelLength; ++c) out[n++] = {a, b, c};
  return out;
}

/// Shared, precomputed copy of generate_kernel_indices().
const KernelIndexSet& kernel_indices() noexcept;

struct Kernel {
  std::array<double, kKernelLength> weights{};
  KernelTriple beta_indices{};
};

/// Throws Error(invalid_kernel) unless the triple is strictly increasing in 0..8.
Kernel kernel_weights(const KernelTriple& triple);

struct DilationPlan {
  std::vector<std::size_t> dilations;
  std::vector<std::size_t> features_per_dilation;  // per kernel
  double max_exponent = 0.0;
  std::size_t input_length = 0;
  std::size_t num_features = kDefaultNumFeatures;  // as requested
  std::size_t max_dilations_per_kernel = kDefaultMaxDilations;

  std::size_t num_dilations() const noexcept { return dilations.size(); }
  std::size_t features_per_kernel() const noexcept;
  /// 84 * sum(features_per_dilation).
  std::size_t total_features() const noexcept;
  /// Offset of the first feature slot of dilation j (dilation-major layout).
  std::size_t dilation_offset(std::size_t j) const noexcept;

  bool operator==(const DilationPlan&) const = default;
};

/// Dilations log-uniformly spaced so that the widest kernel spans the whole
/// series, with feature counts proportional to how often each dilation
/// occurs on the grid.
DilationPlan plan_dilations(std::size_t input_length,
                            std::size_t num_features = kDefaultNumFeatures,
                            std::size_t max_dilations_per_kernel = kDefaultMaxDilations);

/// value_i = (i * golden_ratio) mod 1 for i = 1..count.
std::vector<double> quantile_sequence(std::size_t count);

/// Largest multiple of 84 not exceeding num_features.
std::size_t total_num_features(std::size_t num_features = kDefaultNumFeatures);

}  // namespace minirocket
