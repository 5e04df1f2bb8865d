#include "dasdn/dsp/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace dasdn::dsp {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n == 0) throw UsageError("RealFft: length must be positive");
  std::vector<double> re(n);
  std::vector<std::complex<double>> cx(n / 2 + 1);
  auto* c = reinterpret_cast<fftw_complex*>(cx.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), re.data(), c, flags);
  inverse_plan_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), c, re.data(), flags | FFTW_DESTROY_INPUT);
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  if (in.size() != n_ || out.size() != bins()) throw ShapeError("RealFft::forward: buffer size mismatch");
  // r2c does not modify its input.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) const {
  if (in.size() != bins() || out.size() != n_) throw ShapeError("RealFft::inverse: buffer size mismatch");
  std::vector<std::complex<double>> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
}

Grid2D filter_traces(const Grid2D& data, double fs, const std::function<double(double)>& gain, Exec exec) {
  const std::size_t nt = data.rows();
  const std::size_t nc = data.cols();
  Grid2D out(nt, nc);
  if (nt == 0 || nc == 0) return out;

  const RealFft fft(nt);
  std::vector<double> g(fft.bins());
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = gain(static_cast<double>(k) * fs / static_cast<double>(nt));

  auto run_trace = [&](std::size_t c) {
    std::vector<double> trace(nt);
    std::vector<std::complex<double>> spec(fft.bins());
    for (std::size_t t = 0; t < nt; ++t) trace[t] = data(t, c);
    fft.forward(trace, spec);
    for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= g[k];
    fft.inverse(spec, trace);
    const double inv_n = 1.0 / static_cast<double>(nt);
    for (std::size_t t = 0; t < nt; ++t) out(t, c) = trace[t] * inv_n;
  };

  if (exec == Exec::serial) {
    for (std::size_t c = 0; c < nc; ++c) run_trace(c);
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nc); ++c) run_trace(static_cast<std::size_t>(c));
  }
  return out;
}

std::vector<double> amplitude_spectrum(std::span<const double> x) {
  const RealFft fft(x.size());
  std::vector<std::complex<double>> spec(fft.bins());
  fft.forward(x, spec);
  std::vector<double> amp(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) amp[k] = std::abs(spec[k]);
  return amp;
}

}  // namespace dasdn::dsp
