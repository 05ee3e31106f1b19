#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "ifes/errors.hpp"

namespace ifes {

/// Closed interval [lo, hi] with lo < hi.
class Interval {
public:
  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(std::isfinite(lo) && std::isfinite(hi)) || !(lo < hi)) {
      throw RangeError("invalid interval [" + std::to_string(lo) + ", " + std::to_string(hi) +
                       "]: need finite lo < hi");
    }
  }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double length() const noexcept { return hi_ - lo_; }

  bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }

  /// Slack used when floating-point round-off pushes a point just outside.
  double slack() const noexcept {
    return 1e-12 * std::max({1.0, std::abs(lo_), std::abs(hi_)});
  }

  bool contains_with_slack(double x) const noexcept {
    return lo_ - slack() <= x && x <= hi_ + slack();
  }

  double clamp(double x) const noexcept { return std::clamp(x, lo_, hi_); }

  /// i-th of `count` uniformly spaced points, endpoints hit exactly.
  double uniform_point(std::size_t i, std::size_t count) const noexcept {
    if (count < 2 || i == 0) return lo_;
    if (i + 1 == count) return hi_;
    return lo_ + (hi_ - lo_) * (static_cast<double>(i) / static_cast<double>(count - 1));
  }

  friend bool operator==(const Interval&, const Interval&) = default;

private:
  double lo_;
  double hi_;
};

}  // namespace ifes
