#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace delab::stats {

/// Benjamini-Yekutieli step-up adjustment, valid under arbitrary dependence:
///
///   adj_(i) = min_{j >= i} min(1, p_(j) * m * c(m) / j),  c(m) = sum_{k<=m} 1/k
///
/// Adjusted values are returned in the input order. Rejecting adjusted
/// p-values below alpha controls the false discovery rate at alpha.
inline std::vector<double> by_adjust(const std::vector<double>& pvalues) {
  if (pvalues.empty()) throw std::invalid_argument("by_adjust: empty input");
  for (double p : pvalues) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("by_adjust: p-value outside [0,1]");
  }
  const std::size_t m = pvalues.size();
  double harmonic = 0.0;
  for (std::size_t k = 1; k <= m; ++k) harmonic += 1.0 / static_cast<double>(k);

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });

  std::vector<double> adjusted(m);
  double running = 1.0;
  for (std::size_t i = m; i-- > 0;) {
    const double rank = static_cast<double>(i + 1);
    const double scaled =
        std::min(1.0, pvalues[order[i]] * static_cast<double>(m) * harmonic / rank);
    running = std::min(running, scaled);
    adjusted[order[i]] = running;
  }
  return adjusted;
}

}  // namespace delab::stats
