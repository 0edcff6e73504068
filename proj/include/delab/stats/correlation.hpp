#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "delab/rng.hpp"
#include "delab/stats/fdr.hpp"
#include "delab/stats/kolmogorov_smirnov.hpp"
#include "delab/stats/quantile.hpp"
#include "delab/stats/sample_matrix.hpp"

namespace delab::stats {

namespace detail {

/// Columns centered to mean zero with their Euclidean norms, the shared
/// preprocessing for every correlation-based check. A zero-norm column is
/// degenerate: its correlations are undefined and reported as 0.
struct CenteredColumns {
  std::size_t runs = 0;
  std::vector<std::vector<double>> columns;
  std::vector<double> norms;
  std::vector<bool> degenerate;
};

inline CenteredColumns center_columns(const SampleMatrix& matrix) {
  CenteredColumns centered;
  centered.runs = matrix.runs();
  centered.columns.resize(matrix.dims());
  centered.norms.resize(matrix.dims());
  centered.degenerate.resize(matrix.dims());
  for (std::size_t d = 0; d < matrix.dims(); ++d) {
    std::vector<double> column = matrix.column(d);
    double mean = 0.0;
    for (double v : column) mean += v;
    mean /= static_cast<double>(column.size());
    double sumsq = 0.0;
    for (double& v : column) {
      v -= mean;
      sumsq += v * v;
    }
    centered.norms[d] = std::sqrt(sumsq);
    centered.degenerate[d] = centered.norms[d] == 0.0;
    centered.columns[d] = std::move(column);
  }
  return centered;
}

inline double pair_correlation(const CenteredColumns& centered, std::size_t i, std::size_t j) {
  if (centered.degenerate[i] || centered.degenerate[j]) return 0.0;
  double dot = 0.0;
  const auto& a = centered.columns[i];
  const auto& b = centered.columns[j];
  for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
  return dot / (centered.norms[i] * centered.norms[j]);
}

inline double correlation_of(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t m = a.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t k = 0; k < m; ++k) { ma += a[k]; mb += b[k]; }
  ma /= static_cast<double>(m);
  mb /= static_cast<double>(m);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double da = a[k] - ma, db = b[k] - mb;
    dot += da * db;
    na += da * da;
    nb += db * db;
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

}  // namespace detail

/// Sample Pearson coefficient for every unordered dimension pair, in the
/// order (0,1),(0,2),...,(n-2,n-1). Zero-variance dimensions yield 0 and
/// raise the matching flag when `degenerate` is supplied.
inline std::vector<double> pearson_pairs(const SampleMatrix& matrix,
                                         std::vector<bool>* degenerate = nullptr) {
  if (matrix.runs() < 3) throw std::invalid_argument("pearson_pairs: needs at least 3 runs");
  const auto centered = detail::center_columns(matrix);
  const std::size_t n = matrix.dims();
  std::vector<double> coefficients;
  coefficients.reserve(n * (n - 1) / 2);
  if (degenerate != nullptr) degenerate->clear();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      coefficients.push_back(detail::pair_correlation(centered, i, j));
      if (degenerate != nullptr)
        degenerate->push_back(centered.degenerate[i] || centered.degenerate[j]);
    }
  }
  return coefficients;
}

/// Percentile of |rho| between two independent uniform samples of the given
/// size, estimated by Monte Carlo. Each replicate runs on its own sub-stream
/// seeded from `state`, so replicates can be farmed out without changing the
/// result. With runs=100, simulations=10000 and percentile=99 this reproduces
/// the published outlier threshold (~0.25).
inline double correlation_baseline_threshold(std::size_t runs, std::size_t simulations,
                                             double percentile, RngState& state) {
  if (runs < 3) throw std::invalid_argument("correlation_baseline_threshold: runs < 3");
  if (simulations < 1000)
    throw std::invalid_argument("correlation_baseline_threshold: needs >= 1000 simulations");
  if (!(percentile >= 0.0 && percentile <= 100.0))
    throw std::invalid_argument("correlation_baseline_threshold: percentile outside [0,100]");
  std::vector<std::uint64_t> replicate_seeds(simulations);
  for (auto& seed : replicate_seeds) seed = state.next_u64();
  std::vector<double> coefficients(simulations);
  std::vector<double> a(runs), b(runs);
  for (std::size_t s = 0; s < simulations; ++s) {
    RngState replicate(replicate_seeds[s]);
    for (double& v : a) v = replicate.uniform01();
    for (double& v : b) v = replicate.uniform01();
    coefficients[s] = std::abs(detail::correlation_of(a, b));
  }
  std::sort(coefficients.begin(), coefficients.end());
  return quantile_sorted(coefficients, percentile / 100.0);
}

/// Fraction of dimension pairs whose |rho| lies strictly above the
/// threshold. Purely descriptive: the expected fraction under uniformity is
/// the threshold's tail mass, with no multiplicity correction.
inline double correlation_outlier_fraction(const SampleMatrix& matrix, double threshold) {
  const std::vector<double> coefficients = pearson_pairs(matrix);
  std::size_t outliers = 0;
  for (double rho : coefficients) {
    if (std::abs(rho) > threshold) ++outliers;
  }
  return static_cast<double>(outliers) / static_cast<double>(coefficients.size());
}

struct PermutationAnisotropyResult {
  std::size_t count = 0;          // observed pairs above their critical value
  double expected = 0.0;          // alpha * n(n-1)/2 under the no-correlation null
  double critical_count = 0.0;    // (1-alpha) percentile of the bootstrapped count
  std::vector<std::pair<std::size_t, std::size_t>> outlier_pairs;
  double p_value = 1.0;           // bootstrap tail probability of the observed count
  bool reject = false;
};

/// Permutation test for anisotropy, free of any uniformity assumption on the
/// marginals. Per pair, a null sample of |rho| is built by shuffling the
/// data within each dimension; the (1-alpha) percentile is that pair's
/// critical value. The count of observed exceedances is then compared to the
/// (1-alpha) percentile of its own null distribution, bootstrapped from
/// fresh within-dimension shuffles.
inline PermutationAnisotropyResult permutation_anisotropy_test(
    const SampleMatrix& matrix, double alpha, std::size_t permutations, std::size_t bootstrap,
    RngState& state) {
  if (matrix.runs() < 3)
    throw std::invalid_argument("permutation_anisotropy_test: needs at least 3 runs");
  if (permutations < 100 || bootstrap < 100)
    throw std::invalid_argument("permutation_anisotropy_test: needs >= 100 replicates");

  auto centered = detail::center_columns(matrix);
  const std::size_t n = matrix.dims();
  const std::size_t pair_count = n * (n - 1) / 2;

  std::vector<double> observed;
  observed.reserve(pair_count);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      observed.push_back(std::abs(detail::pair_correlation(centered, i, j)));
    }
  }

  // Null |rho| per pair from within-dimension shuffles. Shuffling the
  // centered values leaves means and norms untouched, so each replicate is
  // 30 shuffles plus one dot product per pair.
  auto shuffled = centered;
  const auto replicate = [&](std::vector<double>& out) {
    for (std::size_t d = 0; d < n; ++d) state.shuffle(shuffled.columns[d]);
    std::size_t p = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        out[p++] = std::abs(detail::pair_correlation(shuffled, i, j));
      }
    }
  };

  std::vector<double> null_values(pair_count * permutations);
  std::vector<double> buffer(pair_count);
  for (std::size_t rep = 0; rep < permutations; ++rep) {
    replicate(buffer);
    for (std::size_t p = 0; p < pair_count; ++p) null_values[p * permutations + rep] = buffer[p];
  }

  std::vector<double> critical(pair_count);
  {
    std::vector<double> pair_null(permutations);
    for (std::size_t p = 0; p < pair_count; ++p) {
      std::copy(null_values.begin() + static_cast<std::ptrdiff_t>(p * permutations),
                null_values.begin() + static_cast<std::ptrdiff_t>((p + 1) * permutations),
                pair_null.begin());
      std::sort(pair_null.begin(), pair_null.end());
      critical[p] = quantile_sorted(pair_null, 1.0 - alpha);
    }
  }

  PermutationAnisotropyResult result;
  result.expected = alpha * static_cast<double>(pair_count);
  {
    std::size_t p = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (observed[p] > critical[p]) {
          ++result.count;
          result.outlier_pairs.emplace_back(i, j);
        }
        ++p;
      }
    }
  }

  // Bootstrap the count's null distribution from fresh shuffles.
  std::vector<double> counts(bootstrap);
  std::size_t at_least_observed = 0;
  for (std::size_t rep = 0; rep < bootstrap; ++rep) {
    replicate(buffer);
    std::size_t count = 0;
    for (std::size_t p = 0; p < pair_count; ++p) count += buffer[p] > critical[p] ? 1 : 0;
    counts[rep] = static_cast<double>(count);
    if (count >= result.count) ++at_least_observed;
  }
  std::sort(counts.begin(), counts.end());
  result.critical_count = quantile_sorted(counts, 1.0 - alpha);
  result.p_value = static_cast<double>(1 + at_least_observed) /
                   static_cast<double>(bootstrap + 1);
  result.reject = static_cast<double>(result.count) > result.critical_count;
  return result;
}

/// Two-sample KS for every dimension pair with BY adjustment: do any two
/// dimensions follow different distributions? Entries are indexed by pair.
inline TestReport pairwise_distribution_equality(const SampleMatrix& matrix,
                                                 double alpha = kDefaultAlpha) {
  TestReport report;
  report.test_name = "ks_pairs";
  report.alpha = alpha;
  const std::size_t n = matrix.dims();
  if (n < 2) return report;

  std::vector<std::vector<double>> sorted_columns(n);
  for (std::size_t d = 0; d < n; ++d) {
    sorted_columns[d] = matrix.column(d);
    std::sort(sorted_columns[d].begin(), sorted_columns[d].end());
  }

  std::vector<double> raw;
  raw.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const KsResult ks = detail::ks_2sample_sorted(sorted_columns[i], sorted_columns[j]);
      TestEntry entry;
      entry.statistic = ks.statistic;
      entry.p_raw = ks.p_value;
      report.per_dimension.push_back(entry);
      raw.push_back(ks.p_value);
    }
  }
  const std::vector<double> adjusted = by_adjust(raw);
  for (std::size_t p = 0; p < adjusted.size(); ++p) {
    report.per_dimension[p].p_adj = adjusted[p];
    report.per_dimension[p].reject = adjusted[p] < alpha;
  }
  return report;
}

}  // namespace delab::stats
