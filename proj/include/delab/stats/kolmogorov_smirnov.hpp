#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace delab::stats {

struct KsResult {
  double statistic = 0.0;  // D = sup |ECDF_a - ECDF_b|
  double p_value = 1.0;
};

namespace detail {

/// Survival function of the Kolmogorov limiting distribution, evaluated at
/// lambda = sqrt(ne) * D. Two series are used for numerical stability: the
/// Jacobi-theta form for small lambda and the alternating-sign form
/// otherwise (the same split R's pkstwo makes).
inline double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.0) {
    const double pi = std::numbers::pi;
    double sum = 0.0;
    const double factor = -pi * pi / (8.0 * lambda * lambda);
    for (int k = 1; k <= 21; k += 2) {
      const double term = std::exp(factor * static_cast<double>(k) * static_cast<double>(k));
      sum += term;
      if (term < 1e-18) break;
    }
    const double cdf = std::sqrt(2.0 * pi) / lambda * sum;
    return std::min(1.0, std::max(0.0, 1.0 - cdf));
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * static_cast<double>(k) * static_cast<double>(k) *
                                 lambda * lambda);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-18) break;
  }
  return std::min(1.0, std::max(0.0, 2.0 * sum));
}

/// D statistic for two pre-sorted samples; handles ties by advancing both
/// ECDFs past each distinct value before comparing.
inline double ks_statistic_sorted(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t na = a.size(), nb = b.size();
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < na && j < nb) {
    const double v = std::min(a[i], b[j]);
    while (i < na && a[i] <= v) ++i;
    while (j < nb && b[j] <= v) ++j;
    const double diff = std::abs(static_cast<double>(i) / static_cast<double>(na) -
                                 static_cast<double>(j) / static_cast<double>(nb));
    if (diff > d) d = diff;
  }
  return d;
}

inline KsResult ks_2sample_sorted(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_2sample: empty sample");
  KsResult result;
  result.statistic = ks_statistic_sorted(a, b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double effective = na * nb / (na + nb);
  result.p_value = kolmogorov_sf(std::sqrt(effective) * result.statistic);
  return result;
}

}  // namespace detail

/// Two-sample Kolmogorov-Smirnov test. The p-value uses the asymptotic
/// distribution with effective sample size na*nb/(na+nb).
inline KsResult ks_2sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return detail::ks_2sample_sorted(a, b);
}

}  // namespace delab::stats
