#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "delab/rng.hpp"
#include "delab/stats/anderson_darling.hpp"
#include "delab/stats/fdr.hpp"
#include "delab/stats/kolmogorov_smirnov.hpp"
#include "delab/stats/sample_matrix.hpp"

namespace delab::stats {

namespace detail {

inline TestReport ad_per_dimension(const SampleMatrix& matrix, double alpha,
                                   std::string name, bool fold) {
  TestReport report;
  report.test_name = std::move(name);
  report.alpha = alpha;
  std::vector<double> raw(matrix.dims());
  report.per_dimension.resize(matrix.dims());
  for (std::size_t d = 0; d < matrix.dims(); ++d) {
    std::vector<double> column = matrix.column(d);
    if (fold) {
      for (double& v : column) v = std::abs(2.0 * v - 1.0);
    }
    const double a2 = ad_statistic(std::move(column));
    report.per_dimension[d].statistic = a2;
    raw[d] = ad_pvalue(a2, matrix.runs());
    report.per_dimension[d].p_raw = raw[d];
  }
  const std::vector<double> adjusted = by_adjust(raw);
  for (std::size_t d = 0; d < matrix.dims(); ++d) {
    report.per_dimension[d].p_adj = adjusted[d];
    report.per_dimension[d].reject = adjusted[d] < alpha;
  }
  return report;
}

/// runs+1 consecutive gaps of a sorted sample, boundaries included.
inline std::vector<double> unit_spacings(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<double> gaps;
  gaps.reserve(values.size() + 1);
  double previous = 0.0;
  for (double v : values) {
    gaps.push_back(v - previous);
    previous = v;
  }
  gaps.push_back(1.0 - previous);
  return gaps;
}

}  // namespace detail

/// Per-dimension AD test of uniformity in [0,1] with BY control across
/// dimensions. The original structural-bias detection procedure.
inline TestReport sb_test_default(const SampleMatrix& matrix, double alpha = kDefaultAlpha) {
  return detail::ad_per_dimension(matrix, alpha, "ad_default", /*fold=*/false);
}

/// AD test after collapsing samples across the centre: y = |x - 1/2|,
/// rescaled back to [0,1]. More sensitive to bias towards or away from the
/// centre of the space; blind to asymmetries, so it complements rather than
/// replaces the default test.
inline TestReport sb_test_transformed(const SampleMatrix& matrix, double alpha = kDefaultAlpha) {
  return detail::ad_per_dimension(matrix, alpha, "ad_transformed", /*fold=*/true);
}

/// Single AD test on all runs*dims values pooled. The codomain of the probe
/// is identical in every dimension, so pooling needs no transformation and
/// supplies the sample size the per-dimension test lacks.
inline TestReport sb_test_aggregated(const SampleMatrix& matrix, double alpha = kDefaultAlpha) {
  TestReport report;
  report.test_name = "ad_aggregated";
  report.alpha = alpha;
  const double a2 = ad_statistic(matrix.values());
  AggregateEntry aggregate;
  aggregate.statistic = a2;
  aggregate.p_value = ad_pvalue(a2, matrix.values().size());
  aggregate.reject = aggregate.p_value < alpha;
  report.aggregate = aggregate;
  return report;
}

/// 1-spacing test: per dimension, the runs+1 consecutive gaps (boundary gaps
/// included) are compared by two-sample KS against a pooled baseline of
/// spacings from `baseline_replicates` uniform samples of identical size,
/// drawn from `state`. Per-dimension p-values are BY-adjusted; the pooled
/// spacings of all dimensions are reported as the aggregate row. Detects
/// clustering that per-dimension AD misses.
inline TestReport spacing_test(const SampleMatrix& matrix, double alpha, RngState& state,
                               std::size_t baseline_replicates = 1000) {
  TestReport report;
  report.test_name = "spacing";
  report.alpha = alpha;

  std::vector<double> baseline;
  baseline.reserve(baseline_replicates * (matrix.runs() + 1));
  std::vector<double> sample(matrix.runs());
  for (std::size_t rep = 0; rep < baseline_replicates; ++rep) {
    for (double& v : sample) v = state.uniform01();
    const std::vector<double> gaps = detail::unit_spacings(sample);
    baseline.insert(baseline.end(), gaps.begin(), gaps.end());
  }
  std::sort(baseline.begin(), baseline.end());

  std::vector<double> raw(matrix.dims());
  std::vector<double> pooled;
  pooled.reserve(matrix.dims() * (matrix.runs() + 1));
  report.per_dimension.resize(matrix.dims());
  for (std::size_t d = 0; d < matrix.dims(); ++d) {
    std::vector<double> gaps = detail::unit_spacings(matrix.column(d));
    pooled.insert(pooled.end(), gaps.begin(), gaps.end());
    std::sort(gaps.begin(), gaps.end());
    const KsResult ks = detail::ks_2sample_sorted(gaps, baseline);
    report.per_dimension[d].statistic = ks.statistic;
    raw[d] = ks.p_value;
    report.per_dimension[d].p_raw = ks.p_value;
  }
  const std::vector<double> adjusted = by_adjust(raw);
  for (std::size_t d = 0; d < matrix.dims(); ++d) {
    report.per_dimension[d].p_adj = adjusted[d];
    report.per_dimension[d].reject = adjusted[d] < alpha;
  }

  std::sort(pooled.begin(), pooled.end());
  const KsResult pooled_ks = detail::ks_2sample_sorted(pooled, baseline);
  AggregateEntry aggregate;
  aggregate.statistic = pooled_ks.statistic;
  aggregate.p_value = pooled_ks.p_value;
  aggregate.reject = pooled_ks.p_value < alpha;
  report.aggregate = aggregate;
  return report;
}

}  // namespace delab::stats
