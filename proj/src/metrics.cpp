#include "dasdn/metrics.hpp"

#include <cmath>
#include <limits>

namespace dasdn::metrics {

double norm(const Grid2D& g) {
  double ss = 0.0;
  for (double v : g.values()) ss += v * v;
  return std::sqrt(ss);
}

double rms(const Grid2D& g) {
  if (g.empty()) return 0.0;
  return norm(g) / std::sqrt(static_cast<double>(g.size()));
}

double snr_db(const Grid2D& clean, const Grid2D& estimate, SnrConvention conv) {
  require_same_shape(clean, estimate, "snr_db");
  double signal = 0.0;
  double residual = 0.0;
  const auto x = clean.values();
  const auto xh = estimate.values();
  for (std::size_t i = 0; i < x.size(); ++i) {
    signal += x[i] * x[i];
    const double r = x[i] - xh[i];
    residual += r * r;
  }
  if (signal == 0.0) throw UsageError("snr_db: reference record is identically zero");
  if (residual == 0.0) return std::numeric_limits<double>::infinity();
  if (conv == SnrConvention::squared_residual) return 20.0 * std::log10(std::sqrt(signal) / residual);
  return 10.0 * std::log10(signal / residual);
}

double mse(const Grid2D& a, const Grid2D& b) {
  require_same_shape(a, b, "mse");
  if (a.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.values()[i] - b.values()[i];
    s += d * d;
  }
  return s / static_cast<double>(a.size());
}

double mae(const Grid2D& a, const Grid2D& b) {
  require_same_shape(a, b, "mae");
  if (a.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a.values()[i] - b.values()[i]);
  return s / static_cast<double>(a.size());
}

}  // namespace dasdn::metrics
