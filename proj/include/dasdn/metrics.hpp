#pragma once

#include "dasdn/grid.hpp"

namespace dasdn::metrics {

enum class SnrConvention {
  standard,          // 10 log10(|X|^2 / |X - Xhat|^2)
  squared_residual,  // 20 log10(|X| / |X - Xhat|^2); not scale-invariant
};

/// S/N in dB of `estimate` against the reference `clean` (Frobenius norms).
/// Returns +infinity when the residual is exactly zero. Throws UsageError
/// for an all-zero reference and ShapeError on mismatched dims.
double snr_db(const Grid2D& clean, const Grid2D& estimate, SnrConvention conv = SnrConvention::standard);

double mse(const Grid2D& a, const Grid2D& b);
double mae(const Grid2D& a, const Grid2D& b);

/// Frobenius norm and root-mean-square of a grid.
double norm(const Grid2D& g);
double rms(const Grid2D& g);

}  // namespace dasdn::metrics
