#pragma once

#include <cmath>
#include <numbers>
#include <utility>

namespace anisospec {

inline constexpr double kPi = std::numbers::pi;

/// Reduces an angle to [0, period).
inline double wrap_angle(double a, double period = kPi) {
  double r = std::fmod(a, period);
  if (r < 0) r += period;
  if (r >= period) r -= period;
  return r;
}

/// Distance between two angles modulo `period`.
inline double angle_distance(double a, double b, double period = kPi) {
  const double d = wrap_angle(a - b, period);
  return std::min(d, period - d);
}

/// Golden-section search for a maximizer of f on [a, b]. Returns (argmax, max).
/// f only needs to be unimodal near the bracket; for piecewise-smooth
/// functions the best point ever evaluated is returned.
template <class F>
std::pair<double, double> golden_maximize(F&& f, double a, double b, int max_iter = 90,
                                          double x_tol = 1e-15) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  double best_x = fc >= fd ? c : d;
  double best_f = std::max(fc, fd);
  for (int it = 0; it < max_iter && (b - a) > x_tol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      if (fc > best_f) { best_f = fc; best_x = c; }
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      if (fd > best_f) { best_f = fd; best_x = d; }
    }
  }
  return {best_x, best_f};
}

template <class F>
std::pair<double, double> golden_minimize(F&& f, double a, double b, int max_iter = 90,
                                          double x_tol = 1e-15) {
  auto r = golden_maximize([&](double x) { return -f(x); }, a, b, max_iter, x_tol);
  return {r.first, -r.second};
}

}  // namespace anisospec
