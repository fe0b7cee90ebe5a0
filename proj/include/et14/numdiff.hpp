#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace et14 {

/// Floor for relative residual denominators.
inline constexpr double kResidualFloor = 1e-30;

/// h = eps^(1/5) * max(1, |x|), the balance point of a fourth-order stencil.
inline double fd_step(double x) {
  static const double base = std::pow(std::numeric_limits<double>::epsilon(), 0.2);
  return base * std::max(1.0, std::abs(x));
}

/// Fourth-order central first derivative of f at x.
template <class F>
double central_diff4(F&& f, double x) {
  const double h = fd_step(x);
  return (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
}

inline double relative_residual(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), kResidualFloor);
}

}  // namespace et14
