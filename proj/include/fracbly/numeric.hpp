#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>

namespace fracbly {

inline constexpr double kPi = std::numbers::pi;

/// Neumaier's variant of Kahan summation. Robust when terms have mixed
/// signs and very different magnitudes.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

/// Gamma function. Backed by the C library; accurate to a few ulps over
/// the arguments the bounds need (half-integers in [1, d/2+2] and the
/// negative non-integers -alpha/2).
inline double gamma_fn(double x) { return std::tgamma(x); }

/// Volume of the d-dimensional unit ball, pi^{d/2} / Gamma(1 + d/2).
double unit_ball_volume(int d);

/// Relative difference |a-b| / max(|a|,|b|,floor).
inline double rel_diff(double a, double b, double floor = 1e-300) {
  const double scale = std::max({std::abs(a), std::abs(b), floor});
  return std::abs(a - b) / scale;
}

}  // namespace fracbly
