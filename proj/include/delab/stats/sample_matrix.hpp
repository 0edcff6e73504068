#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace delab::stats {

/// Significance level used throughout the battery unless overridden.
inline constexpr double kDefaultAlpha = 0.01;

/// runs x dims matrix of final positions in [0,1], row-major. The unit of
/// analysis for the whole statistical battery.
class SampleMatrix {
 public:
  SampleMatrix(std::size_t runs, std::size_t dims, std::vector<double> values)
      : runs_(runs), dims_(dims), values_(std::move(values)) {
    if (runs_ < 2) throw std::invalid_argument("SampleMatrix: needs at least 2 runs");
    if (dims_ < 1) throw std::invalid_argument("SampleMatrix: needs at least 1 dimension");
    if (values_.size() != runs_ * dims_)
      throw std::invalid_argument("SampleMatrix: value count does not match shape");
    for (double v : values_) {
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("SampleMatrix: entry outside [0,1]");
    }
  }

  std::size_t runs() const { return runs_; }
  std::size_t dims() const { return dims_; }
  double at(std::size_t run, std::size_t dim) const { return values_[run * dims_ + dim]; }

  std::vector<double> column(std::size_t dim) const {
    std::vector<double> out(runs_);
    for (std::size_t r = 0; r < runs_; ++r) out[r] = at(r, dim);
    return out;
  }

  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t runs_;
  std::size_t dims_;
  std::vector<double> values_;
};

/// One per-dimension (or per-pair) test outcome.
struct TestEntry {
  double statistic = 0.0;
  double p_raw = 1.0;
  double p_adj = 1.0;
  bool reject = false;
};

struct AggregateEntry {
  double statistic = 0.0;
  double p_value = 1.0;
  bool reject = false;
};

/// Verdicts of one detection method. For per-dimension methods, entries are
/// indexed by dimension; for pairwise methods, by pair in the order
/// (0,1),(0,2),...,(n-2,n-1).
struct TestReport {
  std::string test_name;
  double alpha = 0.01;
  std::vector<TestEntry> per_dimension;
  std::optional<AggregateEntry> aggregate;

  std::size_t rejection_count() const {
    std::size_t count = 0;
    for (const auto& entry : per_dimension) count += entry.reject ? 1 : 0;
    return count;
  }
};

}  // namespace delab::stats
