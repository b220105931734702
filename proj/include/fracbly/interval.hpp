#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace fracbly {

/// Closed interval with outward rounding. +, -, * on doubles are correctly
/// rounded, so widening by one ulp per operation encloses the exact
/// result; pow/log/exp from libm are not, and are widened by four ulps.
class Interval {
 public:
  constexpr Interval() = default;
  explicit Interval(double x) : lo_(x), hi_(x) {}
  Interval(double lo, double hi) : lo_(lo), hi_(hi) {}

  [[nodiscard]] double lower() const { return lo_; }
  [[nodiscard]] double upper() const { return hi_; }
  [[nodiscard]] bool certainly_negative() const { return hi_ < 0.0; }
  [[nodiscard]] bool contains(double x) const { return lo_ <= x && x <= hi_; }

  friend Interval operator+(Interval a, Interval b) {
    return widen(a.lo_ + b.lo_, a.hi_ + b.hi_, 1);
  }
  friend Interval operator-(Interval a, Interval b) {
    return widen(a.lo_ - b.hi_, a.hi_ - b.lo_, 1);
  }
  friend Interval operator*(Interval a, Interval b) {
    const double p1 = a.lo_ * b.lo_, p2 = a.lo_ * b.hi_;
    const double p3 = a.hi_ * b.lo_, p4 = a.hi_ * b.hi_;
    return widen(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}), 1);
  }

  /// x^p for x >= 0 and real p; monotone in x on [0, inf).
  friend Interval pow(Interval x, double p) {
    const double a = std::pow(std::max(x.lo_, 0.0), p);
    const double b = std::pow(std::max(x.hi_, 0.0), p);
    return widen(std::min(a, b), std::max(a, b), 4);
  }

 private:
  static Interval widen(double lo, double hi, int ulps) {
    for (int i = 0; i < ulps; ++i) {
      lo = std::nextafter(lo, -std::numeric_limits<double>::infinity());
      hi = std::nextafter(hi, std::numeric_limits<double>::infinity());
    }
    return {lo, hi};
  }

  double lo_ = 0.0;
  double hi_ = 0.0;
};

}  // namespace fracbly
