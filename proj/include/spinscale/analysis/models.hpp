#pragma once

#include <cmath>

namespace spinscale::fit::models {

inline double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

// Dipolar free-decay shape: sinc(w t) exp(-(h t)^2 / 2).
inline double abragam(double t, double w, double h) {
  return sinc(w * t) * std::exp(-0.5 * h * t * h * t);
}

// exp(2 G^2/s^2 - 2 sqrt(G^4/s^4 + G^2 t^2)); Gaussian exp(-s^2 t^2) at short
// times, exponential exp(-2 G t) at long times, and exactly 1 at t = 0.
inline double flambaum_izrailev(double t, double gamma, double sigma) {
  const double a = gamma * gamma / (sigma * sigma);
  return std::exp(2.0 * a - 2.0 * std::sqrt(a * a + gamma * gamma * t * t));
}

// A2 + (A1 - A2) / (1 + exp((x - x0) / dx))
inline double boltzmann(double x, double a1, double a2, double x0, double dx) {
  return a2 + (a1 - a2) / (1.0 + std::exp((x - x0) / dx));
}

inline double power_law(double x, double amplitude, double exponent) {
  return amplitude * std::pow(x, exponent);
}

// sqrt(R^2 + x^2): saturation of the echo-rate ratio.
inline double saturation(double x, double r) { return std::sqrt(r * r + x * x); }

}  // namespace spinscale::fit::models
