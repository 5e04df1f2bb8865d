#pragma once

#include <cstddef>
#include <vector>

namespace dasdn::wavesim {

/// Ricker wavelet (1 - 2 pi^2 f0^2 tau^2) exp(-pi^2 f0^2 tau^2), tau = t - t0.
double ricker(double f0, double t, double t0);

/// `n` samples of the wavelet at t = k * dt.
std::vector<double> ricker_trace(double f0, double t0, double dt, std::size_t n);

}  // namespace dasdn::wavesim
