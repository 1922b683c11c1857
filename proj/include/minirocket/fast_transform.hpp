#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "minirocket/bias_fit.hpp"
#include "minirocket/kernel_plan.hpp"
#include "minirocket/types.hpp"

namespace minirocket {

/// Working set for one series: A = -X and G = 3X stored once with 4 * d_max
/// zeros on either side, so the nine shifted alignments of G for any
/// dilation are views at offsets (j - 4) * d. Plus the shared all-alpha
/// output and one kernel output: four vectors in place of thirteen.
class ConvolutionScratch {
 public:
  explicit ConvolutionScratch(std::size_t length = 0) { resize(length); }

  void resize(std::size_t length);
  std::size_t length() const noexcept { return length_; }

  /// Computes A and G for a new series.
  void load(std::span<const double> x);

  /// Computes C_alpha for `dilation`. Skipped if already current.
  void prepare_dilation(std::size_t dilation);

  /// C = C_alpha + the three aligned G rows picked by the triple, over
  /// positions [begin, end). Requires prepare_dilation(). The returned span
  /// covers only that range.
  std::span<const double> combine(const KernelTriple& triple, std::size_t begin, std::size_t end);
  std::span<const double> combine(const KernelTriple& triple) { return combine(triple, 0, length_); }

  /// One full-length kernel/dilation output for the loaded series.
  std::span<const double> convolve(const KernelTriple& triple, std::size_t dilation);

  std::span<const double> c_alpha() const noexcept { return c_alpha_; }
  std::size_t dilation() const noexcept { return dilation_; }

  /// Series-length buffers held: padded A, padded G, C_alpha, C.
  static constexpr std::size_t kVectors = 4;

 private:
  const double* aligned(std::size_t tap) const noexcept;

  std::size_t length_ = 0;
  std::size_t pad_ = 0;         // zeros on each side of A and G
  std::size_t dilation_ = 0;    // dilation C_alpha currently holds, 0 if none
  std::vector<double> alpha_;   // A, padded
  std::vector<double> gamma_;   // G, padded
  std::vector<double> c_alpha_;
  std::vector<double> c_;
};

/// Fraction of entries strictly greater than `bias`. Throws on empty input.
double ppv(std::span<const double> c, double bias);

/// Centred, zero-padded dilated convolution of x with the kernel for `triple`.
std::vector<double> convolve_one(std::span<const double> x, const KernelTriple& triple,
                                 std::size_t dilation);

/// True if combination (dilation_index, kernel_index) pools over the trimmed
/// (unpadded) part of the output.
constexpr bool uses_trimmed_output(std::size_t dilation_index, std::size_t kernel_index) noexcept {
  return ((dilation_index + kernel_index) & 1u) != 0;
}

struct TransformOptions {
  /// Test hook: swaps the padded and trimmed halves. Only for checking that
  /// the oracle comparison notices a convention error.
  bool invert_padding_parity = false;
};

/// Feature matrix for every series, parallel over examples with OpenMP.
/// Output is bit-identical for any thread count.
FeatureMatrix transform(const TimeSeriesDataset& dataset, const TransformParameters& params,
                        const TransformOptions& options = {});

/// Serial single-series transform into a caller-provided row.
void transform_series(std::span<const double> x, const TransformParameters& params,
                      ConvolutionScratch& scratch, std::span<double> out,
                      const TransformOptions& options = {});

}  // namespace minirocket
