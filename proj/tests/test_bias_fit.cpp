#include <doctest.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "minirocket/bias_fit.hpp"
#include "minirocket/error.hpp"
#include "minirocket/reference.hpp"
#include "test_util.hpp"

using namespace minirocket;
using minirocket::testing::random_dataset;

namespace {

DilationPlan single_dilation_plan(std::size_t length, std::size_t per_kernel = 1) {
  DilationPlan plan;
  plan.dilations = {1};
  plan.features_per_dilation = {per_kernel};
  plan.input_length = length;
  plan.num_features = 84 * per_kernel;
  return plan;
}

// Independent median: average of the two middle order statistics.
double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST_CASE("quantile estimator") {
  const std::vector<double> a{1, 2, 3};
  CHECK(quantile(a, 0.5) == 2.0);
  const std::vector<double> b{3, 1};
  CHECK(quantile(b, 0.5) == 2.0);
  const std::vector<double> c{5};
  for (double q : {0.0, 0.3, 1.0}) CHECK(quantile(c, q) == 5.0);
  const std::vector<double> d{4, 0, 2, 6};
  CHECK(quantile(d, 0.0) == 0.0);
  CHECK(quantile(d, 1.0) == 6.0);
  CHECK(quantile(d, 0.25) == doctest::Approx(1.5));

  CHECK_THROWS_AS(quantile(std::vector<double>{}, 0.5), Error);
  CHECK_THROWS_AS(quantile(a, 1.5), Error);
  CHECK_THROWS_AS(quantile(a, -0.1), Error);
}

TEST_CASE("quantile agrees with the reference estimator") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(1 + trial % 37);
    for (auto& x : v) x = normal(rng);
    const double q = unit(rng);
    CHECK(quantile(v, q) == reference::quantile_naive(v, q));
    const double lo = *std::min_element(v.begin(), v.end());
    const double hi = *std::max_element(v.begin(), v.end());
    CHECK(quantile(v, q) >= lo);
    CHECK(quantile(v, q) <= hi);
  }
}

TEST_CASE("select_example is in range and uses every example") {
  std::set<std::size_t> hit;
  for (std::size_t c = 0; c < 2000; ++c) {
    const auto e = select_example(42, c, 7);
    CHECK(e < 7);
    hit.insert(e);
  }
  CHECK(hit.size() == 7);
  CHECK(select_example(1, 5, 1) == 0);
  CHECK(select_example(9, 17, 100) == select_example(9, 17, 100));
}

TEST_CASE("all-zero training series gives zero biases") {
  TimeSeriesDataset d;
  d.length = 64;
  d.values.assign(64, 0.0);
  d.labels = {"a"};
  const auto params = fit(d, 9996, 32, BiasVariant::random_example, 7);
  CHECK(params.num_features() == 9996);
  for (double b : params.biases) CHECK(b == 0.0);
}

TEST_CASE("constant series: biases come only from the zero-padded edges") {
  // Padding breaks shift invariance at the ends of the output: with c != 0
  // the interior of the output is zero but the edges are not.
  TimeSeriesDataset d;
  d.length = 400;
  d.values.assign(400, 5.0);
  d.labels = {"a"};
  const auto plan = plan_dilations(400, 840);
  const auto q = quantile_sequence(plan.total_features());
  const auto params = fit_biases(d, plan, q, 1);
  std::size_t zero = 0;
  for (double b : params.biases) zero += b == 0.0;
  CHECK(zero > params.biases.size() / 2);
  CHECK(zero < params.biases.size());
}

TEST_CASE("fit_biases is deterministic for a fixed seed") {
  const auto d = random_dataset(12, 150, 11);
  const auto a = fit(d, 9996, 32, BiasVariant::random_example, 123);
  const auto b = fit(d, 9996, 32, BiasVariant::random_example, 123);
  CHECK(a.biases == b.biases);
  CHECK(a.seed == std::optional<std::uint64_t>{123});
  const auto c = fit(d, 9996, 32, BiasVariant::random_example, 124);
  CHECK(a.biases != c.biases);
}

TEST_CASE("fit_biases is independent of thread count") {
  const auto d = random_dataset(9, 300, 5);
  omp_set_num_threads(1);
  const auto one = fit(d, 2000, 32, BiasVariant::random_example, 8);
  const auto det_one = fit(d, 2000, 32, BiasVariant::deterministic);
  omp_set_num_threads(4);
  const auto four = fit(d, 2000, 32, BiasVariant::random_example, 8);
  const auto det_four = fit(d, 2000, 32, BiasVariant::deterministic);
  omp_set_num_threads(1);
  CHECK(one.biases == four.biases);
  CHECK(det_one.biases == det_four.biases);
}

TEST_CASE("median bias for kernel [6,7,8] matches the oracle convolution") {
  const auto d = random_dataset(1, 57, 21);
  const auto plan = single_dilation_plan(57);
  const std::vector<double> q(84, 0.5);
  const auto params = fit_biases(d, plan, q, 99);
  REQUIRE(kernel_indices()[83] == KernelTriple{6, 7, 8});
  const auto c = reference::convolve_naive(d.series(0), kernel_weights({6, 7, 8}).weights, 1);
  CHECK(params.biases[83] == doctest::Approx(median_of(c)).epsilon(1e-12));
  // Every other kernel follows the same rule.
  for (std::size_t k = 0; k < 84; ++k) {
    const auto ck = reference::convolve_naive(d.series(0), kernel_weights(kernel_indices()[k]).weights, 1);
    CHECK(params.biases[k] == doctest::Approx(median_of(ck)).epsilon(1e-12));
  }
}

TEST_CASE("deterministic variant pools every training example") {
  const auto d = random_dataset(2, 40, 33);
  const auto plan = single_dilation_plan(40, 2);
  const auto q = quantile_sequence(plan.total_features());
  const auto params = fit_biases_deterministic(d, plan, q);
  CHECK(params.variant == BiasVariant::deterministic);
  CHECK_FALSE(params.seed.has_value());
  for (std::size_t k = 0; k < 84; ++k) {
    const auto w = kernel_weights(kernel_indices()[k]).weights;
    auto all = reference::convolve_naive(d.series(0), w, 1);
    const auto second = reference::convolve_naive(d.series(1), w, 1);
    all.insert(all.end(), second.begin(), second.end());
    std::sort(all.begin(), all.end());
    for (std::size_t f = 0; f < 2; ++f) {
      const std::size_t slot = 2 * k + f;
      const double h = q[slot] * (all.size() - 1);
      const auto lo = static_cast<std::size_t>(h);
      const double expected = all[lo] + (h - lo) * (all[lo + 1] - all[lo]);
      CHECK(params.biases[slot] == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("single-example training set: both variants agree") {
  const auto d = random_dataset(1, 200, 4);
  const auto det = fit(d, 9996, 32, BiasVariant::deterministic);
  for (std::uint64_t seed : {0ull, 1ull, 77ull}) {
    const auto rnd = fit(d, 9996, 32, BiasVariant::random_example, seed);
    CHECK(rnd.biases == det.biases);
  }
}

TEST_CASE("deterministic variant ignores training-set order") {
  const auto d = random_dataset(6, 120, 8);
  const auto base = fit(d, 2000, 32, BiasVariant::deterministic);
  std::vector<std::size_t> reversed, shuffled{3, 0, 5, 1, 4, 2};
  for (std::size_t i = 0; i < d.size(); ++i) reversed.push_back(d.size() - 1 - i);
  CHECK(fit(d.subset(reversed), 2000, 32, BiasVariant::deterministic).biases == base.biases);
  CHECK(fit(d.subset(shuffled), 2000, 32, BiasVariant::deterministic).biases == base.biases);
}

TEST_CASE("duplicating the training set moves interpolated quantiles") {
  // Linear interpolation uses h = q(n-1), which is not invariant under
  // duplication: {0,1} at q=0.25 gives 0.25, {0,0,1,1} gives 0.
  CHECK(quantile(std::vector<double>{0, 1}, 0.25) == 0.25);
  CHECK(quantile(std::vector<double>{0, 0, 1, 1}, 0.25) == 0.0);

  const auto d = random_dataset(4, 60, 8);
  const auto base = fit(d, 840, 32, BiasVariant::deterministic);
  const auto dup = fit(d.subset(std::vector<std::size_t>{0, 1, 2, 3, 0, 1, 2, 3}), 840, 32, BiasVariant::deterministic);
  double worst = 0.0;
  for (std::size_t i = 0; i < base.biases.size(); ++i)
    worst = std::max(worst, std::abs(dup.biases[i] - base.biases[i]));
  CHECK(worst > 0.0);
}

TEST_CASE("biases scale with the data") {
  const auto d = random_dataset(5, 90, 12);
  const auto base = fit(d, 1000, 32, BiasVariant::random_example, 3);
  for (double s : {0.5, 2.0, 3.0}) {
    auto scaled = d;
    for (auto& v : scaled.values) v *= s;
    const auto p = fit(scaled, 1000, 32, BiasVariant::random_example, 3);
    for (std::size_t i = 0; i < p.biases.size(); ++i) {
      if (s == 3.0)
        CHECK(p.biases[i] == doctest::Approx(s * base.biases[i]).epsilon(1e-12).scale(1.0));
      else
        CHECK(p.biases[i] == s * base.biases[i]);  // power-of-two scaling is exact
    }
  }
}

TEST_CASE("optimised fitting agrees with the reference fitting") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto d = random_dataset(1 + seed * 3, 64 + 50 * seed, seed + 100);
    const auto plan = plan_dilations(d.length, 84 * (5 + 20 * seed));
    const auto q = quantile_sequence(plan.total_features());
    const auto fast = fit_biases(d, plan, q, seed);
    const auto naive = reference::fit_biases_naive(d, plan, q, seed);
    const auto fast_det = fit_biases_deterministic(d, plan, q);
    const auto naive_det = reference::fit_biases_deterministic_naive(d, plan, q);
    REQUIRE(fast.biases.size() == naive.biases.size());
    for (std::size_t i = 0; i < fast.biases.size(); ++i) {
      CHECK(std::abs(fast.biases[i] - naive.biases[i]) <= 1e-9);
      CHECK(std::abs(fast_det.biases[i] - naive_det.biases[i]) <= 1e-9);
    }
  }
}

TEST_CASE("fit_biases input validation") {
  const auto plan = plan_dilations(50, 840);
  const auto q = quantile_sequence(plan.total_features());
  TimeSeriesDataset empty;
  empty.length = 50;
  CHECK_THROWS_AS(fit_biases(empty, plan, q, 1), Error);
  CHECK_THROWS_AS(fit_biases_deterministic(empty, plan, q), Error);

  const auto wrong = random_dataset(3, 60, 1);
  try {
    fit_biases(wrong, plan, q, 1);
    FAIL("expected a length mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::length_mismatch);
  }
  const auto ok = random_dataset(3, 50, 1);
  CHECK_THROWS_AS(fit_biases(ok, plan, std::vector<double>(3, 0.5), 1), Error);
}

TEST_CASE("layout check") {
  const auto d = random_dataset(3, 50, 1);
  auto p = fit(d, 840);
  CHECK_NOTHROW(p.check_layout());
  p.biases.pop_back();
  CHECK_THROWS_AS(p.check_layout(), Error);
}
