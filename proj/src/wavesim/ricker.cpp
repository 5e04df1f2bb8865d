#include "dasdn/wavesim/ricker.hpp"

#include <cmath>
#include <numbers>

#include "dasdn/error.hpp"

namespace dasdn::wavesim {

double ricker(double f0, double t, double t0) {
  if (!(f0 > 0.0)) throw ConfigError("ricker: dominant frequency must be positive");
  const double a = std::numbers::pi * f0 * (t - t0);
  const double a2 = a * a;
  return (1.0 - 2.0 * a2) * std::exp(-a2);
}

std::vector<double> ricker_trace(double f0, double t0, double dt, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = ricker(f0, static_cast<double>(k) * dt, t0);
  return out;
}

}  // namespace dasdn::wavesim
