#include <doctest.h>

#include <cmath>

#include "minirocket/bias_fit.hpp"
#include "minirocket/error.hpp"
#include "minirocket/reference.hpp"
#include "test_util.hpp"

using namespace minirocket;
using namespace minirocket::reference;

TEST_CASE("naive convolution of an impulse") {
  std::vector<double> x(15, 0.0);
  x[7] = 1.0;
  const auto w = kernel_weights({6, 7, 8}).weights;
  const auto c = convolve_naive(x, w, 1);
  REQUIRE(c.size() == 15);
  const std::vector<double> expected{0, 0, 0, 2, 2, 2, -1, -1, -1, -1, -1, -1, 0, 0, 0};
  CHECK(c == expected);
}

TEST_CASE("naive convolution written out by hand") {
  // x = 1..9, d = 1, output[4] uses every tap: sum_j w_j * (j + 1).
  std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8, 9};
  const auto w = kernel_weights({0, 4, 8}).weights;
  const auto c = convolve_naive(x, w, 1);
  CHECK(c[4] == 2 * 1 - 2 - 3 - 4 + 2 * 5 - 6 - 7 - 8 + 2 * 9);
  // output[0]: taps j = 4..8 are in range.
  CHECK(c[0] == 2 * 1 - 2 - 3 - 4 + 2 * 5);
}

TEST_CASE("naive convolution of a constant") {
  const std::vector<double> zero(30, 0.0);
  const std::vector<double> seven(30, 7.0);
  for (const auto& t : kernel_indices()) {
    const auto w = kernel_weights(t).weights;
    for (double v : convolve_naive(zero, w, 2)) CHECK(v == 0.0);
    const auto c = convolve_naive(seven, w, 2);
    for (std::size_t i = 8; i < 22; ++i) CHECK(c[i] == 0.0);
  }
}

TEST_CASE("naive convolution rejects oversized dilation") {
  const std::vector<double> x(9, 1.0);
  const auto w = kernel_weights({0, 1, 2}).weights;
  CHECK_NOTHROW(convolve_naive(x, w, 1));
  CHECK_THROWS_AS(convolve_naive(x, w, 2), Error);
}

TEST_CASE("naive quantile and ppv") {
  CHECK(quantile_naive({1, 2, 3}, 0.5) == 2.0);
  CHECK(quantile_naive({3, 1}, 0.5) == 2.0);
  CHECK(quantile_naive({5}, 0.9) == 5.0);
  CHECK_THROWS_AS(quantile_naive({}, 0.5), Error);
  CHECK(ppv_naive(std::vector<double>{-1, 0, 1}, 0.0) == doctest::Approx(1.0 / 3.0));
  CHECK(ppv_naive(std::vector<double>{0, 0, 0}, 0.0) == 0.0);
}

TEST_CASE("naive transform layout and constants") {
  TimeSeriesDataset d;
  d.length = 33;
  d.values.assign(2 * 33, 0.0);
  d.labels = {"x", "y"};
  const auto params = fit_biases_naive(d, plan_dilations(33, 1000), quantile_sequence(plan_dilations(33, 1000).total_features()), 4);
  const auto f = transform_naive(d, params);
  CHECK(f.cols == 84 * (1000 / 84));
  CHECK(f.rows == 2);
  for (double v : f.values) CHECK(v == 0.0);
}

TEST_CASE("naive transform validates inputs") {
  const auto train = minirocket::testing::random_dataset(2, 50, 3);
  const auto params = fit(train, 840);
  CHECK_THROWS_AS(transform_naive(minirocket::testing::random_dataset(2, 49, 3), params), Error);
}
