#include "minirocket/fast_transform.hpp"

#include <algorithm>
#include <cstdint>
#include <string>

#include "minirocket/error.hpp"

namespace minirocket {

namespace {

// Hot loops get an AVX2 clone picked at load time; baseline x86-64 cannot
// vectorise the 64-bit compare-and-count.
#if defined(__GNUC__) && defined(__x86_64__) && !defined(__clang__)
#define MINIROCKET_SIMD_CLONES __attribute__((target_clones("avx512f", "avx2", "default")))
#else
#define MINIROCKET_SIMD_CLONES
#endif

// Offset of kernel tap j relative to the output position.
inline std::ptrdiff_t tap_offset(std::size_t j, std::size_t dilation) noexcept {
  return (static_cast<std::ptrdiff_t>(j) - 4) * static_cast<std::ptrdiff_t>(dilation);
}

MINIROCKET_SIMD_CLONES
std::int64_t count_above(const double* c, std::size_t n, double bias) noexcept {
  std::int64_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += c[i] > bias;
  return count;
}

MINIROCKET_SIMD_CLONES
void add_to(double* dst, const double* src, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) dst[i] += src[i];
}

// Positions per block in the transform; keeps the per-kernel working set in L1.
constexpr std::size_t kBlock = 512;

MINIROCKET_SIMD_CLONES
void sum4(double* out, const double* a, const double* b, const double* c, const double* d,
          std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i] + c[i] + d[i];
}

void check_dilation(std::size_t length, std::size_t dilation) {
  if (dilation == 0 || (kKernelLength - 1) * dilation > length - 1 || length < kKernelLength)
    throw Error(ErrorCode::invalid_argument,
                "dilation " + std::to_string(dilation) + " is too large for series length " +
                    std::to_string(length));
}

}  // namespace

void ConvolutionScratch::resize(std::size_t length) {
  length_ = length;
  pad_ = length >= kKernelLength ? 4 * ((length - 1) / 8) : 0;
  dilation_ = 0;
  alpha_.assign(length + 2 * pad_, 0.0);
  gamma_.assign(length + 2 * pad_, 0.0);
  c_alpha_.assign(length, 0.0);
  c_.assign(length, 0.0);
}

void ConvolutionScratch::load(std::span<const double> x) {
  if (x.size() != length_) resize(x.size());
  double* a = alpha_.data() + pad_;
  double* g = gamma_.data() + pad_;
  for (std::size_t i = 0; i < x.size(); ++i) {
    a[i] = kAlpha * x[i];
    g[i] = kGamma * x[i];
  }
  dilation_ = 0;
}

const double* ConvolutionScratch::aligned(std::size_t tap) const noexcept {
  return gamma_.data() + pad_ + tap_offset(tap, dilation_);
}

void ConvolutionScratch::prepare_dilation(std::size_t dilation) {
  if (dilation == dilation_) return;
  check_dilation(length_, dilation);
  dilation_ = dilation;
  // Centre tap first, then the others in tap order; the zero padding adds
  // exact zeros where a tap falls outside the series.
  const double* a = alpha_.data() + pad_;
  std::copy(a, a + length_, c_alpha_.begin());
  for (std::size_t j = 0; j < kKernelLength; ++j)
    if (j != 4) add_to(c_alpha_.data(), a + tap_offset(j, dilation), length_);
}

std::span<const double> ConvolutionScratch::combine(const KernelTriple& triple, std::size_t begin,
                                                    std::size_t end) {
  sum4(c_.data() + begin, c_alpha_.data() + begin, aligned(triple[0]) + begin,
       aligned(triple[1]) + begin, aligned(triple[2]) + begin, end - begin);
  return {c_.data() + begin, end - begin};
}

std::span<const double> ConvolutionScratch::convolve(const KernelTriple& triple,
                                                     std::size_t dilation) {
  prepare_dilation(dilation);
  return combine(triple);
}

double ppv(std::span<const double> c, double bias) {
  if (c.empty()) throw Error(ErrorCode::empty_input, "ppv of an empty vector");
  return static_cast<double>(count_above(c.data(), c.size(), bias)) / static_cast<double>(c.size());
}

std::vector<double> convolve_one(std::span<const double> x, const KernelTriple& triple,
                                 std::size_t dilation) {
  kernel_weights(triple);  // validates
  check_dilation(x.size(), dilation);
  ConvolutionScratch scratch(x.size());
  scratch.load(x);
  auto c = scratch.convolve(triple, dilation);
  return {c.begin(), c.end()};
}

void transform_series(std::span<const double> x, const TransformParameters& params,
                      ConvolutionScratch& scratch, std::span<double> out,
                      const TransformOptions& options) {
  const auto& plan = params.plan;
  if (x.size() != plan.input_length)
    throw Error(ErrorCode::length_mismatch, "series length " + std::to_string(x.size()) +
                                                " does not match fitted length " +
                                                std::to_string(plan.input_length));
  if (out.size() != params.num_features())
    throw Error(ErrorCode::layout_mismatch, "output row has the wrong number of features");

  const auto& kernels = kernel_indices();
  const std::size_t n = x.size();
  scratch.load(x);

  // Counts accumulate block by block in `out`, then become proportions.
  std::fill(out.begin(), out.end(), 0.0);
  std::size_t first_slot = 0;
  for (std::size_t j = 0; j < plan.num_dilations(); ++j) {
    const std::size_t d = plan.dilations[j];
    const std::size_t per_combination = plan.features_per_dilation[j];
    const std::size_t pad = 4 * d;
    scratch.prepare_dilation(d);

    for (std::size_t begin = 0; begin < n; begin += kBlock) {
      const std::size_t end = std::min(n, begin + kBlock);
      std::size_t slot = first_slot;
      for (std::size_t k = 0; k < kNumKernels; ++k, slot += per_combination) {
        const auto c = scratch.combine(kernels[k], begin, end);
        std::size_t lo = begin, hi = end;
        if (uses_trimmed_output(j, k) != options.invert_padding_parity) {
          lo = std::max(lo, pad);
          hi = std::min(hi, n - pad);
          if (lo >= hi) continue;
        }
        const double* window = c.data() + (lo - begin);
        for (std::size_t f = 0; f < per_combination; ++f)
          out[slot + f] += static_cast<double>(count_above(window, hi - lo, params.biases[slot + f]));
      }
    }

    std::size_t slot = first_slot;
    for (std::size_t k = 0; k < kNumKernels; ++k) {
      const bool trimmed = uses_trimmed_output(j, k) != options.invert_padding_parity;
      const auto window_len = static_cast<double>(trimmed ? n - 2 * pad : n);
      for (std::size_t f = 0; f < per_combination; ++f, ++slot) out[slot] /= window_len;
    }
    first_slot = slot;
  }
}

FeatureMatrix transform(const TimeSeriesDataset& dataset, const TransformParameters& params,
                        const TransformOptions& options) {
  params.check_layout();
  if (dataset.length != params.plan.input_length)
    throw Error(ErrorCode::length_mismatch,
                "dataset series length " + std::to_string(dataset.length) +
                    " does not match fitted length " + std::to_string(params.plan.input_length));

  const std::size_t rows = dataset.size();
  FeatureMatrix features(rows, params.num_features());
  const auto signed_rows = static_cast<std::ptrdiff_t>(rows);

#pragma omp parallel
  {
    ConvolutionScratch scratch(dataset.length);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < signed_rows; ++i) {
      const auto row = static_cast<std::size_t>(i);
      transform_series(dataset.series(row), params, scratch, features.row(row), options);
    }
  }
  return features;
}

}  // namespace minirocket
