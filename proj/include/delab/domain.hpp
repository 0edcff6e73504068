#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace delab {

/// Axis-aligned box: per-dimension lower/upper bounds. Immutable after
/// construction and freely shareable between runs.
class Domain {
 public:
  Domain(std::vector<double> lower, std::vector<double> upper)
      : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size())
      throw std::invalid_argument("Domain: bound vectors differ in length");
    if (lower_.empty()) throw std::invalid_argument("Domain: dimension must be >= 1");
    for (std::size_t i = 0; i < lower_.size(); ++i) {
      if (!(lower_[i] < upper_[i]))
        throw std::invalid_argument("Domain: requires lower[i] < upper[i]");
    }
  }

  /// The unit hypercube [0,1]^n, the probe function's native domain.
  static Domain unit(std::size_t n) {
    return Domain(std::vector<double>(n, 0.0), std::vector<double>(n, 1.0));
  }

  std::size_t dimension() const { return lower_.size(); }
  double lower(std::size_t i) const { return lower_[i]; }
  double upper(std::size_t i) const { return upper_[i]; }
  double width(std::size_t i) const { return upper_[i] - lower_[i]; }

  /// Membership with inclusive bounds.
  bool contains(std::span<const double> x) const {
    check_length(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < lower_[i] || x[i] > upper_[i]) return false;
    }
    return true;
  }

  /// Indices of coordinates outside their bounds.
  std::vector<std::size_t> violated_dimensions(std::span<const double> x) const {
    check_length(x);
    std::vector<std::size_t> violated;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < lower_[i] || x[i] > upper_[i]) violated.push_back(i);
    }
    return violated;
  }

 private:
  void check_length(std::span<const double> x) const {
    if (x.size() != lower_.size())
      throw std::invalid_argument("Domain: vector length does not match dimension");
  }

  std::vector<double> lower_;
  std::vector<double> upper_;
};

}  // namespace delab
