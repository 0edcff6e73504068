#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "delab/rng.hpp"
#include "delab/stats/anderson_darling.hpp"
#include "delab/stats/fdr.hpp"
#include "delab/stats/sample_matrix.hpp"
#include "delab/stats/uniformity.hpp"
#include "support/stat_helpers.hpp"

using delab::RngState;
using delab::stats::ad_pvalue;
using delab::stats::ad_statistic;
using delab::stats::by_adjust;
using delab::stats::SampleMatrix;

namespace {

SampleMatrix uniform_matrix(std::size_t runs, std::size_t dims, std::uint64_t seed) {
  RngState rng(seed);
  std::vector<double> values(runs * dims);
  for (double& v : values) v = rng.uniform01();
  return SampleMatrix(runs, dims, std::move(values));
}

}  // namespace

TEST_CASE("ad statistic closed-form anchors", "[stats_ad]") {
  SECTION("single observation at 0.5") {
    REQUIRE(ad_statistic({0.5}) == Catch::Approx(-1.0 + 2.0 * std::log(2.0)).margin(1e-12));
  }
  SECTION("exact uniform quantiles give a tiny statistic") {
    std::vector<double> quantiles(100);
    for (std::size_t i = 0; i < 100; ++i)
      quantiles[i] = (static_cast<double>(i) + 0.5) / 100.0;
    REQUIRE(ad_statistic(quantiles) < 0.2);
  }
  SECTION("point mass near the boundary explodes") {
    REQUIRE(ad_statistic(std::vector<double>(100, 0.99)) > 100.0);
  }
  SECTION("boundary-exact values are clamped, not fatal") {
    std::size_t clamped = 0;
    const double a2 = ad_statistic({0.0, 0.5, 1.0}, &clamped);
    REQUIRE(clamped == 2);
    REQUIRE(std::isfinite(a2));
  }
  SECTION("errors") {
    REQUIRE_THROWS_AS(ad_statistic({}), std::invalid_argument);
    REQUIRE_THROWS_AS(ad_statistic({1.5}), std::invalid_argument);
  }
}

TEST_CASE("ad statistic is permutation invariant and tail sensitive", "[stats_ad]") {
  std::vector<double> sample{0.11, 0.23, 0.35, 0.47, 0.52, 0.64, 0.71, 0.86, 0.5, 0.92};
  const double reference = ad_statistic(sample);
  RngState rng(1);
  for (int i = 0; i < 50; ++i) {
    rng.shuffle(sample);
    REQUIRE(ad_statistic(sample) == Catch::Approx(reference).margin(1e-12));
  }
  std::vector<double> shifted = sample;
  *std::find(shifted.begin(), shifted.end(), 0.5) = 0.999;
  REQUIRE(ad_statistic(shifted) > reference);
}

TEST_CASE("ad p-values match a Monte Carlo oracle", "[stats_ad]") {
  SECTION("anchors") {
    REQUIRE(ad_pvalue(0.0, 100) > 0.999);
    REQUIRE(ad_pvalue(10.0, 100) < 1e-4);
    REQUIRE(ad_pvalue(3.857, 100) == Catch::Approx(0.01).margin(0.002));
  }
  SECTION("oracle within the documented 0.005") {
    constexpr std::size_t kSims = 200000;
    constexpr std::size_t kM = 100;
    RngState rng(424242);
    std::vector<double> statistics(kSims);
    std::vector<double> sample(kM);
    for (std::size_t s = 0; s < kSims; ++s) {
      for (double& v : sample) v = rng.uniform01();
      statistics[s] = ad_statistic(sample);
    }
    std::sort(statistics.begin(), statistics.end());
    for (const double a2 : {1.0, 1.9329, 2.492, 3.857}) {
      const double empirical =
          static_cast<double>(statistics.end() -
                              std::upper_bound(statistics.begin(), statistics.end(), a2)) /
          static_cast<double>(kSims);
      REQUIRE(ad_pvalue(a2, kM) == Catch::Approx(empirical).margin(0.005));
    }
  }
}

TEST_CASE("by adjustment follows the step-up formula", "[stats_ad]") {
  SECTION("single p unchanged") {
    REQUIRE(by_adjust({0.37})[0] == Catch::Approx(0.37));
  }
  SECTION("hand-computed pair") {
    const auto adjusted = by_adjust({0.01, 0.02});
    REQUIRE(adjusted[0] == Catch::Approx(0.03).margin(1e-12));
    REQUIRE(adjusted[1] == Catch::Approx(0.03).margin(1e-12));
  }
  SECTION("all ones stay ones") {
    for (double adj : by_adjust({1.0, 1.0, 1.0})) REQUIRE(adj == 1.0);
  }
  SECTION("errors") {
    REQUIRE_THROWS_AS(by_adjust({}), std::invalid_argument);
    REQUIRE_THROWS_AS(by_adjust({0.5, 1.5}), std::invalid_argument);
  }
  SECTION("monotone, dominating, capped") {
    RngState rng(3);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> p(17);
      for (double& v : p) v = rng.uniform01();
      const auto adjusted = by_adjust(p);
      for (std::size_t i = 0; i < p.size(); ++i) {
        REQUIRE(adjusted[i] >= p[i]);
        REQUIRE(adjusted[i] <= 1.0);
      }
      std::vector<std::size_t> order(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
      for (std::size_t i = 1; i < order.size(); ++i) {
        REQUIRE(adjusted[order[i]] >= adjusted[order[i - 1]]);
      }
    }
  }
}

TEST_CASE("default per-dimension test holds its level", "[stats_ad]") {
  int clean = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto report = delab::stats::sb_test_default(uniform_matrix(100, 30, 1000 + seed), 0.01);
    if (report.rejection_count() == 0) ++clean;
    for (const auto& entry : report.per_dimension) {
      REQUIRE(entry.reject == (entry.p_adj < 0.01));
      REQUIRE(entry.p_adj >= entry.p_raw);
    }
  }
  REQUIRE(clean >= 190);
}

TEST_CASE("default test flags a beta-distributed dimension", "[stats_ad]") {
  int flagged = 0, false_alarms = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RngState rng(2000 + seed);
    std::vector<double> values(100 * 5);
    for (std::size_t r = 0; r < 100; ++r) {
      values[r * 5] = test_support::beta_int(rng, 5, 5);
      for (std::size_t d = 1; d < 5; ++d) values[r * 5 + d] = rng.uniform01();
    }
    const auto report =
        delab::stats::sb_test_default(SampleMatrix(100, 5, std::move(values)), 0.01);
    if (report.per_dimension[0].reject) ++flagged;
    for (std::size_t d = 1; d < 5; ++d) false_alarms += report.per_dimension[d].reject ? 1 : 0;
  }
  REQUIRE(flagged > 100);        // the biased dimension is caught most of the time
  REQUIRE(false_alarms <= 10);   // the uniform ones are not
}

TEST_CASE("constant dimensions are always rejected", "[stats_ad]") {
  const SampleMatrix matrix(100, 3, std::vector<double>(300, 0.5));
  const auto report = delab::stats::sb_test_default(matrix, 0.01);
  REQUIRE(report.rejection_count() == 3);
}

TEST_CASE("the centre fold maps uniform to uniform", "[stats_ad]") {
  RngState rng(5);
  std::vector<double> counts(100, 0.0);
  constexpr int kDraws = 1000000;
  for (int i = 0; i < kDraws; ++i) {
    const double z = std::abs(2.0 * rng.uniform01() - 1.0);
    std::size_t bin = static_cast<std::size_t>(z * 100.0);
    if (bin >= 100) bin = 99;
    counts[bin] += 1.0;
  }
  const std::vector<double> expected(100, kDraws / 100.0);
  REQUIRE(test_support::chi2_statistic(counts, expected) < 148.230);
}

TEST_CASE("transformed test beats the default on centre-shy samples", "[stats_ad]") {
  RngState rng(6);
  int default_rejections = 0, transformed_rejections = 0;
  constexpr int kSims = 400;
  std::vector<double> sample(100);
  for (int s = 0; s < kSims; ++s) {
    for (double& v : sample) v = 0.05 + 0.9 * rng.uniform01();
    const double a2_default = ad_statistic(sample);
    if (ad_pvalue(a2_default, 100) < 0.01) ++default_rejections;
    std::vector<double> folded = sample;
    for (double& v : folded) v = std::abs(2.0 * v - 1.0);
    const double a2_folded = ad_statistic(folded);
    if (ad_pvalue(a2_folded, 100) < 0.01) ++transformed_rejections;
  }
  const double default_rate = default_rejections / static_cast<double>(kSims);
  const double transformed_rate = transformed_rejections / static_cast<double>(kSims);
  REQUIRE(default_rate < 0.06);
  REQUIRE(transformed_rate > 0.17);
  REQUIRE(transformed_rate < 0.34);
}

TEST_CASE("transformed test rejects symmetric bimodal samples", "[stats_ad]") {
  RngState rng(7);
  std::vector<double> values(100 * 2);
  for (std::size_t r = 0; r < 100; ++r) {
    const double centre = r % 2 == 0 ? 0.1 : 0.9;
    values[r * 2] = centre + rng.uniform_range(-0.005, 0.005);
    values[r * 2 + 1] = rng.uniform01();
  }
  const SampleMatrix matrix(100, 2, std::move(values));
  const auto report = delab::stats::sb_test_transformed(matrix, 0.01);
  REQUIRE(report.per_dimension[0].reject);
  REQUIRE_FALSE(report.per_dimension[1].reject);
}

TEST_CASE("transformed test level matches the default on fresh noise", "[stats_ad]") {
  int clean = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto report =
        delab::stats::sb_test_transformed(uniform_matrix(100, 30, 3000 + seed), 0.01);
    if (report.rejection_count() == 0) ++clean;
  }
  REQUIRE(clean >= 190);
}

TEST_CASE("aggregated test pools the whole matrix", "[stats_ad]") {
  SECTION("level on uniform noise") {
    int rejections = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto report =
          delab::stats::sb_test_aggregated(uniform_matrix(100, 30, 4000 + seed), 0.01);
      REQUIRE(report.aggregate.has_value());
      rejections += report.aggregate->reject ? 1 : 0;
    }
    REQUIRE(rejections <= 4);  // no rejection in >= 98% of replications
  }
  SECTION("blanket range restriction is caught through pooling") {
    RngState rng(8);
    std::vector<double> values(100 * 30);
    for (double& v : values) v = 0.05 + 0.9 * rng.uniform01();
    const auto report =
        delab::stats::sb_test_aggregated(SampleMatrix(100, 30, std::move(values)), 0.01);
    REQUIRE(report.aggregate->reject);
  }
  SECTION("a single constant dimension lowers the pooled p-value") {
    RngState rng(9);
    std::vector<double> noise(100 * 30), tainted(100 * 30);
    for (double& v : noise) v = rng.uniform01();
    for (std::size_t r = 0; r < 100; ++r) {
      for (std::size_t d = 0; d < 30; ++d) {
        tainted[r * 30 + d] = d == 0 ? 0.5 : rng.uniform01();
      }
    }
    const auto clean = delab::stats::sb_test_aggregated(SampleMatrix(100, 30, noise), 0.01);
    const auto biased = delab::stats::sb_test_aggregated(SampleMatrix(100, 30, tainted), 0.01);
    REQUIRE(biased.aggregate->p_value < clean.aggregate->p_value);
  }
}
