#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "delab/rng.hpp"
#include "delab/stats/correlation.hpp"
#include "delab/stats/sample_matrix.hpp"

using delab::RngState;
using delab::stats::correlation_baseline_threshold;
using delab::stats::correlation_outlier_fraction;
using delab::stats::pairwise_distribution_equality;
using delab::stats::pearson_pairs;
using delab::stats::permutation_anisotropy_test;
using delab::stats::SampleMatrix;

namespace {

SampleMatrix uniform_matrix(std::size_t runs, std::size_t dims, std::uint64_t seed) {
  RngState rng(seed);
  std::vector<double> values(runs * dims);
  for (double& v : values) v = rng.uniform01();
  return SampleMatrix(runs, dims, std::move(values));
}

}  // namespace

TEST_CASE("pearson pairs hit the exact anchors", "[stats_correlation]") {
  RngState rng(1);
  std::vector<double> values(50 * 3);
  for (std::size_t r = 0; r < 50; ++r) {
    const double x = rng.uniform01();
    values[r * 3] = x;
    values[r * 3 + 1] = x;        // duplicated dimension
    values[r * 3 + 2] = 1.0 - x;  // mirrored dimension
  }
  const auto coefficients = pearson_pairs(SampleMatrix(50, 3, std::move(values)));
  REQUIRE(coefficients.size() == 3);
  REQUIRE(coefficients[0] == Catch::Approx(1.0).margin(1e-12));   // (0,1)
  REQUIRE(coefficients[1] == Catch::Approx(-1.0).margin(1e-12));  // (0,2)
  REQUIRE(coefficients[2] == Catch::Approx(-1.0).margin(1e-12));  // (1,2)
}

TEST_CASE("pearson pair count and order for n = 30", "[stats_correlation]") {
  const auto coefficients = pearson_pairs(uniform_matrix(10, 30, 2));
  REQUIRE(coefficients.size() == 435);
}

TEST_CASE("pearson pairs are affine invariant", "[stats_correlation]") {
  const SampleMatrix base = uniform_matrix(40, 4, 3);
  const auto reference = pearson_pairs(base);

  std::vector<double> scaled(base.values());
  for (std::size_t r = 0; r < 40; ++r) {
    scaled[r * 4 + 1] = 0.25 + 0.5 * scaled[r * 4 + 1];  // positive slope
    scaled[r * 4 + 2] = 0.9 - 0.8 * scaled[r * 4 + 2];   // negative slope
  }
  const auto transformed = pearson_pairs(SampleMatrix(40, 4, std::move(scaled)));
  for (std::size_t p = 0; p < reference.size(); ++p) {
    REQUIRE(std::abs(transformed[p]) == Catch::Approx(std::abs(reference[p])).margin(1e-9));
  }
}

TEST_CASE("zero-variance dimensions report 0 with a flag", "[stats_correlation]") {
  std::vector<double> values(10 * 2);
  RngState rng(4);
  for (std::size_t r = 0; r < 10; ++r) {
    values[r * 2] = 0.5;
    values[r * 2 + 1] = rng.uniform01();
  }
  std::vector<bool> degenerate;
  const auto coefficients = pearson_pairs(SampleMatrix(10, 2, std::move(values)), &degenerate);
  REQUIRE(coefficients == std::vector<double>{0.0});
  REQUIRE(degenerate == std::vector<bool>{true});
  REQUIRE_THROWS_AS(pearson_pairs(uniform_matrix(2, 3, 5)), std::invalid_argument);
}

TEST_CASE("correlation baseline threshold reproduces its anchors", "[stats_correlation]") {
  SECTION("99th percentile near the published value") {
    RngState rng(42);
    const double threshold = correlation_baseline_threshold(100, 10000, 99.0, rng);
    REQUIRE(threshold > 0.238);
    REQUIRE(threshold < 0.268);
  }
  SECTION("median of |rho| for 100 runs") {
    RngState rng(6);
    const double threshold = correlation_baseline_threshold(100, 10000, 50.0, rng);
    REQUIRE(threshold == Catch::Approx(0.0675).margin(0.005));
  }
  SECTION("threshold shrinks like 1/sqrt(runs)") {
    RngState small_rng(7), large_rng(7);
    const double small = correlation_baseline_threshold(100, 2000, 99.0, small_rng);
    const double large = correlation_baseline_threshold(10000, 1000, 99.0, large_rng);
    const double ratio = small / large;
    REQUIRE(ratio > 8.0);
    REQUIRE(ratio < 12.0);
  }
  SECTION("preconditions") {
    RngState rng(8);
    REQUIRE_THROWS_AS(correlation_baseline_threshold(100, 500, 99.0, rng),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(correlation_baseline_threshold(100, 1000, 101.0, rng),
                      std::invalid_argument);
  }
}

TEST_CASE("outlier fraction anchors", "[stats_correlation]") {
  SECTION("identical dimensions are all outliers") {
    RngState rng(9);
    std::vector<double> values(20 * 3);
    for (std::size_t r = 0; r < 20; ++r) {
      const double x = rng.uniform01();
      values[r * 3] = values[r * 3 + 1] = values[r * 3 + 2] = x;
    }
    REQUIRE(correlation_outlier_fraction(SampleMatrix(20, 3, std::move(values)), 0.2484) == 1.0);
  }
  SECTION("two independent dimensions give 0 or 1") {
    const double fraction = correlation_outlier_fraction(uniform_matrix(100, 2, 10), 0.2484);
    REQUIRE((fraction == 0.0 || fraction == 1.0));
  }
  SECTION("uniform noise stays near the nominal tail mass") {
    double total = 0.0;
    constexpr int kSeeds = 40;
    for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
      total += correlation_outlier_fraction(uniform_matrix(100, 30, 6000 + seed), 0.2565);
    }
    const double mean_fraction = total / kSeeds;
    REQUIRE(mean_fraction < 0.02);
  }
}

TEST_CASE("permutation test flags duplicated dimensions as outlier pairs", "[stats_correlation]") {
  RngState data_rng(11);
  constexpr std::size_t kRuns = 100, kDims = 10;
  std::vector<double> values(kRuns * kDims);
  for (std::size_t r = 0; r < kRuns; ++r) {
    for (std::size_t d = 0; d < kDims; ++d) values[r * kDims + d] = data_rng.uniform01();
    values[r * kDims + 1] = values[r * kDims + 0];
    values[r * kDims + 3] = values[r * kDims + 2];
    values[r * kDims + 5] = values[r * kDims + 4];
  }
  const SampleMatrix matrix(kRuns, kDims, std::move(values));
  RngState rng(12);
  const auto result = permutation_anisotropy_test(matrix, 0.01, 300, 300, rng);
  const auto has_pair = [&](std::size_t i, std::size_t j) {
    return std::find(result.outlier_pairs.begin(), result.outlier_pairs.end(),
                     std::make_pair(i, j)) != result.outlier_pairs.end();
  };
  REQUIRE(has_pair(0, 1));
  REQUIRE(has_pair(2, 3));
  REQUIRE(has_pair(4, 5));
  REQUIRE(result.expected == Catch::Approx(0.01 * 45.0));
}

TEST_CASE("permutation test rejects when enough pairs are correlated", "[stats_correlation]") {
  // One latent dimension copied across six columns yields 15 unit
  // correlations, far above any bootstrap critical count.
  RngState data_rng(13);
  constexpr std::size_t kRuns = 100, kDims = 30;
  std::vector<double> values(kRuns * kDims);
  for (std::size_t r = 0; r < kRuns; ++r) {
    const double shared = data_rng.uniform01();
    for (std::size_t d = 0; d < kDims; ++d) {
      values[r * kDims + d] = d < 6 ? shared : data_rng.uniform01();
    }
  }
  const SampleMatrix matrix(kRuns, kDims, std::move(values));
  RngState rng(14);
  const auto result = permutation_anisotropy_test(matrix, 0.01, 300, 300, rng);
  REQUIRE(result.count >= 15);
  REQUIRE(result.reject);
  REQUIRE(result.p_value < 0.05);
}

TEST_CASE("permutation test level on uniform noise", "[stats_correlation]") {
  int rejections = 0;
  constexpr int kFixtures = 30;
  for (std::uint64_t seed = 0; seed < kFixtures; ++seed) {
    RngState rng(7000 + seed);
    const auto result =
        permutation_anisotropy_test(uniform_matrix(100, 15, 7500 + seed), 0.01, 200, 200, rng);
    rejections += result.reject ? 1 : 0;
  }
  REQUIRE(rejections <= 3);
  RngState rng(15);
  REQUIRE_THROWS_AS(permutation_anisotropy_test(uniform_matrix(100, 5, 16), 0.01, 50, 200, rng),
                    std::invalid_argument);
}

TEST_CASE("pairwise ks finds nothing when all dimensions share a law", "[stats_correlation]") {
  int clean = 0;
  constexpr int kFixtures = 60;
  for (std::uint64_t seed = 0; seed < kFixtures; ++seed) {
    const auto report = pairwise_distribution_equality(uniform_matrix(100, 10, 8000 + seed), 0.01);
    if (report.rejection_count() == 0) ++clean;
  }
  REQUIRE(clean >= static_cast<int>(kFixtures * 0.95));
}

TEST_CASE("pairwise ks pinpoints a dimension with a different law", "[stats_correlation]") {
  RngState data_rng(17);
  constexpr std::size_t kRuns = 100, kDims = 8;
  std::vector<double> values(kRuns * kDims);
  for (std::size_t r = 0; r < kRuns; ++r) {
    values[r * kDims] = data_rng.uniform01() * 0.5;  // U(0, 0.5)
    for (std::size_t d = 1; d < kDims; ++d) values[r * kDims + d] = data_rng.uniform01();
  }
  const auto report =
      pairwise_distribution_equality(SampleMatrix(kRuns, kDims, std::move(values)), 0.01);
  std::size_t involving_zero = 0, others = 0;
  std::size_t pair_index = 0;
  for (std::size_t i = 0; i + 1 < kDims; ++i) {
    for (std::size_t j = i + 1; j < kDims; ++j) {
      if (report.per_dimension[pair_index].reject) {
        if (i == 0) ++involving_zero;
        else ++others;
      }
      ++pair_index;
    }
  }
  REQUIRE(involving_zero >= 5);
  REQUIRE(others == 0);
}

TEST_CASE("pairwise ks on a single dimension is empty", "[stats_correlation]") {
  const auto report = pairwise_distribution_equality(uniform_matrix(50, 1, 18), 0.01);
  REQUIRE(report.per_dimension.empty());
  REQUIRE_FALSE(report.aggregate.has_value());
}
