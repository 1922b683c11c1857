#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "minirocket/error.hpp"
#include "minirocket/kernel_plan.hpp"

using namespace minirocket;

TEST_CASE("kernel indices are the 84 lexicographic 3-combinations of 0..8") {
  const auto idx = generate_kernel_indices();
  CHECK(idx.size() == 84);
  CHECK(idx.front() == KernelTriple{0, 1, 2});
  CHECK(idx.back() == KernelTriple{6, 7, 8});
  CHECK(std::is_sorted(idx.begin(), idx.end()));

  std::set<KernelTriple> seen(idx.begin(), idx.end());
  CHECK(seen.size() == 84);
  for (const auto& t : idx) {
    CHECK(t[0] < t[1]);
    CHECK(t[1] < t[2]);
    CHECK(t[2] <= 8);
  }
  // Brute-force enumeration over all 9-bit masks with three bits set.
  std::size_t masks = 0;
  for (unsigned m = 0; m < 512; ++m) masks += std::popcount(m) == 3 ? 1 : 0;
  CHECK(masks == seen.size());
  CHECK(kernel_indices() == idx);
}

TEST_CASE("kernel weights") {
  SUBCASE("[6,7,8]") {
    const auto k = kernel_weights({6, 7, 8});
    const std::array<double, 9> expected{-1, -1, -1, -1, -1, -1, 2, 2, 2};
    CHECK(k.weights == expected);
  }
  SUBCASE("[0,4,8]") {
    const auto k = kernel_weights({0, 4, 8});
    const std::array<double, 9> expected{2, -1, -1, -1, 2, -1, -1, -1, 2};
    CHECK(k.weights == expected);
  }
  SUBCASE("every kernel sums to zero") {
    for (const auto& t : kernel_indices()) {
      const auto k = kernel_weights(t);
      CHECK(std::accumulate(k.weights.begin(), k.weights.end(), 0.0) == 0.0);
      CHECK(std::count(k.weights.begin(), k.weights.end(), 2.0) == 3);
    }
  }
  SUBCASE("invalid triples") {
    CHECK_THROWS_AS(kernel_weights({0, 1, 9}), Error);
    CHECK_THROWS_AS(kernel_weights({2, 1, 3}), Error);
    CHECK_THROWS_AS(kernel_weights({1, 1, 3}), Error);
    try {
      kernel_weights({7, 8, 9});
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::invalid_kernel);
    }
  }
}

TEST_CASE("plan_dilations for the minimum length collapses to dilation 1") {
  const auto plan = plan_dilations(9, 9996, 32);
  CHECK(plan.max_exponent == 0.0);
  CHECK(plan.dilations == std::vector<std::size_t>{1});
  CHECK(plan.features_per_dilation == std::vector<std::size_t>{119});
  CHECK(plan.total_features() == 9996);
}

TEST_CASE("plan_dilations max exponent") {
  for (std::size_t len : {9u, 17u, 100u, 1024u, 5000u})
    CHECK(plan_dilations(len).max_exponent ==
          doctest::Approx(std::log2((static_cast<double>(len) - 1.0) / 8.0)));
}

// Frozen from an independent numpy evaluation of the grid formula:
// floor(2 ** linspace(0, log2((L-1)/8), t)), np.unique counts, floor(count*f/t),
// remainder added to the first dilations.
TEST_CASE("plan_dilations matches frozen scripted evaluations") {
  struct Case {
    std::size_t length, features, max_dil;
    std::vector<std::size_t> dilations, per_dilation;
  };
  const std::vector<Case> cases = {
      {1024, 9996, 32,
       {1, 2, 3, 4, 5, 6, 7, 8, 10, 12, 14, 16, 19, 22, 26, 31, 36, 42, 50, 58, 68, 79, 93, 109, 127},
       {19, 12, 4, 8, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 3, 3, 3, 3, 3, 3, 3, 3}},
      {128, 9996, 32,
       {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15},
       {30, 19, 12, 12, 8, 4, 8, 4, 4, 3, 3, 3, 3, 3, 3}},
      {100, 840, 32, {1, 2, 3, 4, 5, 7, 9, 12}, {3, 1, 1, 1, 1, 1, 1, 1}},
      {9, 84, 32, {1}, {1}},
      {5000, 9996, 16,
       {1, 2, 3, 5, 8, 13, 20, 30, 47, 73, 112, 172, 264, 406, 624},
       {15, 8, 8, 8, 8, 8, 8, 7, 7, 7, 7, 7, 7, 7, 7}},
  };
  for (const auto& c : cases) {
    CAPTURE(c.length);
    const auto plan = plan_dilations(c.length, c.features, c.max_dil);
    CHECK(plan.dilations == c.dilations);
    CHECK(plan.features_per_dilation == c.per_dilation);
  }
}

TEST_CASE("plan_dilations 1024 budget and reach") {
  const auto plan = plan_dilations(1024, 9996, 32);
  CHECK(plan.features_per_kernel() == 119);
  CHECK(8 * plan.dilations.back() <= 1023);
}

TEST_CASE("single feature per kernel gives one dilation") {
  const auto plan = plan_dilations(500, 84, 32);
  CHECK(plan.dilations == std::vector<std::size_t>{1});
  CHECK(plan.features_per_dilation == std::vector<std::size_t>{1});
  CHECK(plan.total_features() == 84);
}

TEST_CASE("plan_dilations properties over many inputs") {
  for (std::size_t len = 9; len <= 4000; len += (len < 200 ? 1 : 37)) {
    for (std::size_t n : {84u, 168u, 840u, 2000u, 9996u, 10000u, 20000u}) {
      for (std::size_t m : {1u, 8u, 32u, 64u}) {
        CAPTURE(len);
        CAPTURE(n);
        CAPTURE(m);
        const auto plan = plan_dilations(len, n, m);
        REQUIRE(plan.dilations.size() == plan.features_per_dilation.size());
        REQUIRE(!plan.dilations.empty());
        CHECK(plan.dilations.front() == 1);
        CHECK(std::adjacent_find(plan.dilations.begin(), plan.dilations.end(),
                                 std::greater_equal<>()) == plan.dilations.end());
        for (auto d : plan.dilations) CHECK(8 * d <= len - 1);
        for (auto f : plan.features_per_dilation) CHECK(f >= 1);
        CHECK(plan.features_per_kernel() == n / 84);
        CHECK(plan.total_features() == total_num_features(n));
        CHECK(plan.dilations.size() <= std::min<std::size_t>(m, n / 84));
        // The smallest dilation always gets the most features; strict
        // monotonicity does not hold for this grid.
        CHECK(plan.features_per_dilation.front() ==
              *std::max_element(plan.features_per_dilation.begin(), plan.features_per_dilation.end()));
        CHECK(plan == plan_dilations(len, n, m));
      }
    }
  }
}

TEST_CASE("feature allocation is not always monotone in dilation") {
  const auto plan = plan_dilations(1024);
  CHECK(plan.features_per_dilation[2] < plan.features_per_dilation[3]);
}

TEST_CASE("plan_dilations rejects bad inputs") {
  CHECK_THROWS_AS(plan_dilations(8), Error);
  try {
    plan_dilations(3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unsupported_length);
  }
  CHECK_THROWS_AS(plan_dilations(100, 83), Error);
  CHECK_THROWS_AS(plan_dilations(100, 840, 0), Error);
}

TEST_CASE("quantile sequence") {
  const auto q1 = quantile_sequence(1);
  REQUIRE(q1.size() == 1);
  CHECK(q1[0] == doctest::Approx(0.6180339887498949).epsilon(1e-15));
  const auto q2 = quantile_sequence(2);
  CHECK(q2[1] == doctest::Approx(0.2360679774997898).epsilon(1e-12));

  const auto q = quantile_sequence(9996);
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    CHECK(q[i] >= 0.0);
    CHECK(q[i] < 1.0);
    CHECK(q[i] == doctest::Approx(std::fmod((i + 1) * phi, 1.0)));
  }
  // Low discrepancy: every decile receives close to a tenth of the values.
  std::array<int, 10> bins{};
  for (double v : q) ++bins[static_cast<std::size_t>(v * 10)];
  for (int b : bins) CHECK(std::abs(b - 999.6) < 5);
}

TEST_CASE("total_num_features") {
  CHECK(total_num_features(10000) == 9996);
  CHECK(total_num_features(84) == 84);
  CHECK(total_num_features(200) == 168);
  CHECK(total_num_features() == 9996);
  CHECK_THROWS_AS(total_num_features(10), Error);
}
