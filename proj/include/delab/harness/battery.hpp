#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "delab/harness/csv.hpp"
#include "delab/rng.hpp"
#include "delab/stats/correlation.hpp"
#include "delab/stats/uniformity.hpp"

namespace delab {

struct BatteryOptions {
  double alpha = stats::kDefaultAlpha;
  std::size_t permutations = 1000;
  std::size_t bootstrap = 1000;
  std::uint64_t seed = 1;
  /// Correlation outlier threshold; when unset it is simulated from
  /// `threshold_simulations` uniform baselines at `threshold_percentile`.
  std::optional<double> threshold;
  std::size_t threshold_simulations = 10000;
  double threshold_percentile = 99.0;
  std::size_t spacing_replicates = 1000;
};

/// Output of the full structural-bias battery on one sample matrix.
struct BatteryReport {
  stats::TestReport ad_default;
  stats::TestReport ad_transformed;
  stats::TestReport ad_aggregated;
  stats::TestReport spacing;
  stats::TestReport ks_pairs;
  double threshold_used = 0.0;
  double outlier_fraction = 0.0;
  stats::PermutationAnisotropyResult permutation;
  double alpha = stats::kDefaultAlpha;
  /// Entries sitting exactly on a boundary, clamped by the AD tests.
  std::size_t clamped_values = 0;
};

/// Run every detection method on the matrix. Each simulation-backed method
/// draws from its own sub-stream derived from options.seed, so the methods
/// stay independently reproducible regardless of execution order.
inline BatteryReport run_sb_battery(const stats::SampleMatrix& matrix,
                                    const BatteryOptions& options = {}) {
  BatteryReport report;
  report.alpha = options.alpha;
  for (double v : matrix.values()) {
    if (v < stats::kAdClampEpsilon || v > 1.0 - stats::kAdClampEpsilon) ++report.clamped_values;
  }
  report.ad_default = stats::sb_test_default(matrix, options.alpha);
  report.ad_transformed = stats::sb_test_transformed(matrix, options.alpha);
  report.ad_aggregated = stats::sb_test_aggregated(matrix, options.alpha);

  RngState spacing_rng(options.seed + 0x5350414345ULL);
  report.spacing = stats::spacing_test(matrix, options.alpha, spacing_rng,
                                       options.spacing_replicates);

  report.ks_pairs = stats::pairwise_distribution_equality(matrix, options.alpha);

  if (options.threshold.has_value()) {
    report.threshold_used = *options.threshold;
  } else {
    RngState threshold_rng(options.seed + 0x434F5252ULL);
    report.threshold_used = stats::correlation_baseline_threshold(
        matrix.runs(), options.threshold_simulations, options.threshold_percentile,
        threshold_rng);
  }
  report.outlier_fraction = stats::correlation_outlier_fraction(matrix, report.threshold_used);

  RngState permutation_rng(options.seed + 0x5045524DULL);
  report.permutation = stats::permutation_anisotropy_test(
      matrix, options.alpha, options.permutations, options.bootstrap, permutation_rng);
  return report;
}

namespace detail {

inline void write_report_rows(std::ostream& out, const stats::TestReport& report) {
  for (std::size_t i = 0; i < report.per_dimension.size(); ++i) {
    const stats::TestEntry& entry = report.per_dimension[i];
    out << report.test_name << ',' << i << ',' << csv::format_double(entry.statistic) << ','
        << csv::format_double(entry.p_raw) << ',' << csv::format_double(entry.p_adj) << ','
        << (entry.reject ? 1 : 0) << '\n';
  }
  if (report.aggregate.has_value()) {
    out << report.test_name << ",-1," << csv::format_double(report.aggregate->statistic) << ','
        << csv::format_double(report.aggregate->p_value) << ",,"
        << (report.aggregate->reject ? 1 : 0) << '\n';
  }
}

inline nlohmann::json report_to_json(const stats::TestReport& report) {
  nlohmann::json j;
  j["test"] = report.test_name;
  j["alpha"] = report.alpha;
  j["rejections"] = report.rejection_count();
  j["entries"] = nlohmann::json::array();
  for (std::size_t i = 0; i < report.per_dimension.size(); ++i) {
    const stats::TestEntry& entry = report.per_dimension[i];
    j["entries"].push_back({{"dim", i},
                            {"statistic", entry.statistic},
                            {"p_raw", entry.p_raw},
                            {"p_adj", entry.p_adj},
                            {"reject", entry.reject}});
  }
  if (report.aggregate.has_value()) {
    j["aggregate"] = {{"statistic", report.aggregate->statistic},
                      {"p_value", report.aggregate->p_value},
                      {"reject", report.aggregate->reject}};
  }
  return j;
}

}  // namespace detail

/// One row per dimension (or dimension pair), dim = -1 for aggregate rows.
/// The descriptive correlation-outlier fraction appears as a corr_outliers
/// aggregate row, the permutation count as corr_permutation.
inline void write_battery_csv(const std::filesystem::path& path, const BatteryReport& report) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out << "test,dim,statistic,p_raw,p_adj,reject\n";
  detail::write_report_rows(out, report.ad_default);
  detail::write_report_rows(out, report.ad_transformed);
  detail::write_report_rows(out, report.ad_aggregated);
  detail::write_report_rows(out, report.spacing);
  detail::write_report_rows(out, report.ks_pairs);
  out << "corr_outliers,-1," << csv::format_double(report.outlier_fraction) << ",,,"
      << (report.outlier_fraction > report.alpha ? 1 : 0) << '\n';
  out << "corr_permutation,-1," << static_cast<double>(report.permutation.count) << ','
      << csv::format_double(report.permutation.p_value) << ",,"
      << (report.permutation.reject ? 1 : 0) << '\n';
  if (!out) throw DataError("write failed: " + path.string());
}

/// JSON summary: per-test verdicts plus the overview row used to compare
/// methods side by side (rejection counts, outlier fraction, aggregate flag).
inline nlohmann::json battery_to_json(const BatteryReport& report) {
  nlohmann::json j;
  j["alpha"] = report.alpha;
  j["clamped_values"] = report.clamped_values;
  j["tests"] = nlohmann::json::array();
  j["tests"].push_back(detail::report_to_json(report.ad_default));
  j["tests"].push_back(detail::report_to_json(report.ad_transformed));
  j["tests"].push_back(detail::report_to_json(report.ad_aggregated));
  j["tests"].push_back(detail::report_to_json(report.spacing));
  j["tests"].push_back(detail::report_to_json(report.ks_pairs));
  j["corr_outliers"] = {{"threshold", report.threshold_used},
                        {"fraction", report.outlier_fraction}};
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& [i, k] : report.permutation.outlier_pairs) pairs.push_back({i, k});
  j["corr_permutation"] = {{"count", report.permutation.count},
                           {"expected", report.permutation.expected},
                           {"critical_count", report.permutation.critical_count},
                           {"p_value", report.permutation.p_value},
                           {"reject", report.permutation.reject},
                           {"outlier_pairs", pairs}};
  j["overview"] = {{"ad_default_rejections", report.ad_default.rejection_count()},
                   {"ad_transformed_rejections", report.ad_transformed.rejection_count()},
                   {"spacing_rejections", report.spacing.rejection_count()},
                   {"ks_pairs_rejections", report.ks_pairs.rejection_count()},
                   {"corr_outlier_fraction", report.outlier_fraction},
                   {"corr_permutation_reject", report.permutation.reject},
                   {"ad_aggregated_reject",
                    report.ad_aggregated.aggregate.has_value() &&
                        report.ad_aggregated.aggregate->reject},
                   {"spacing_aggregated_reject",
                    report.spacing.aggregate.has_value() && report.spacing.aggregate->reject}};
  return j;
}

}  // namespace delab
