#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "dasdn/exec.hpp"
#include "dasdn/grid.hpp"

namespace dasdn::dsp {

/// Real-input FFT of a fixed length (FFTW, estimate-mode plans so results
/// are reproducible run to run). Execution is thread-safe.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  /// Unnormalized inverse; divide by size() for a round trip.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

 private:
  std::size_t n_;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

/// Multiplies every trace's spectrum (time runs down the rows) by a real,
/// zero-phase gain gain(frequency_hz). `fs` is the sampling rate in Hz.
Grid2D filter_traces(const Grid2D& data, double fs, const std::function<double(double)>& gain,
                     Exec exec = Exec::parallel);

/// One-sided amplitude spectrum |X(f)| of a real sequence.
std::vector<double> amplitude_spectrum(std::span<const double> x);

}  // namespace dasdn::dsp
