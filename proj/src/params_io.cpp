#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "minirocket/data_io.hpp"
#include "minirocket/error.hpp"

namespace minirocket {

namespace {

static_assert(std::endian::native == std::endian::little,
              "parameter files are written in little-endian byte order");

constexpr std::array<char, 8> kMagic = {'M', 'R', 'K', 'T', 'P', 'A', 'R', 'M'};
constexpr std::uint32_t kFormatVersion = 1;

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof value);
  if (!in) throw Error(ErrorCode::format_error, "parameter file is truncated");
  return value;
}

// Rejects absurd counts before allocating for them.
std::uint64_t get_count(std::istream& in, std::uint64_t limit, const char* what) {
  const auto n = get<std::uint64_t>(in);
  if (n > limit) throw Error(ErrorCode::format_error, std::string("implausible ") + what + " count");
  return n;
}

}  // namespace

void write_parameters(const TransformParameters& params, std::ostream& out) {
  params.check_layout();
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.variant));
  put<std::uint64_t>(out, params.seed.has_value() ? 1 : 0);
  put<std::uint64_t>(out, params.seed.value_or(0));
  const auto& plan = params.plan;
  put<std::uint64_t>(out, plan.input_length);
  put<std::uint64_t>(out, plan.num_features);
  put<std::uint64_t>(out, plan.max_dilations_per_kernel);
  put<double>(out, plan.max_exponent);
  put<std::uint64_t>(out, plan.dilations.size());
  for (auto d : plan.dilations) put<std::uint64_t>(out, d);
  for (auto f : plan.features_per_dilation) put<std::uint64_t>(out, f);
  put<std::uint64_t>(out, params.biases.size());
  for (double b : params.biases) put<double>(out, b);
  if (!out) throw Error(ErrorCode::io_error, "failed writing parameters");
}

TransformParameters read_parameters(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw Error(ErrorCode::format_error, "not a parameter file (bad magic)");
  const auto version = get<std::uint32_t>(in);
  if (version != kFormatVersion)
    throw Error(ErrorCode::format_error,
                "unsupported parameter file version " + std::to_string(version));

  TransformParameters params;
  const auto variant = get<std::uint32_t>(in);
  if (variant > 1) throw Error(ErrorCode::format_error, "unknown bias variant");
  params.variant = static_cast<BiasVariant>(variant);
  const auto has_seed = get<std::uint64_t>(in);
  const auto seed = get<std::uint64_t>(in);
  if ((has_seed != 0) != (params.variant == BiasVariant::random_example))
    throw Error(ErrorCode::format_error, "seed presence does not match the bias variant");
  if (has_seed) params.seed = seed;

  auto& plan = params.plan;
  plan.input_length = get<std::uint64_t>(in);
  plan.num_features = get<std::uint64_t>(in);
  plan.max_dilations_per_kernel = get<std::uint64_t>(in);
  plan.max_exponent = get<double>(in);
  const auto n_dil = get_count(in, 1u << 20, "dilation");
  plan.dilations.resize(n_dil);
  plan.features_per_dilation.resize(n_dil);
  for (auto& d : plan.dilations) d = get<std::uint64_t>(in);
  for (auto& f : plan.features_per_dilation) f = get<std::uint64_t>(in);
  const auto n_bias = get_count(in, 1ull << 32, "bias");
  params.biases.resize(n_bias);
  for (auto& b : params.biases) b = get<double>(in);

  // The plan is a pure function of its inputs; a mismatch means corruption.
  const auto expected = plan_dilations(plan.input_length, plan.num_features,
                                       plan.max_dilations_per_kernel);
  if (expected.dilations != plan.dilations ||
      expected.features_per_dilation != plan.features_per_dilation)
    throw Error(ErrorCode::format_error, "stored dilation plan is inconsistent with its inputs");
  params.quantiles = quantile_sequence(plan.total_features());
  params.check_layout();
  return params;
}

void save_parameters(const TransformParameters& params, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  write_parameters(params, out);
}

TransformParameters load_parameters(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  return read_parameters(in);
}

}  // namespace minirocket
