#include "dasdn/noise.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>

#include "dasdn/dsp/fft.hpp"
#include "dasdn/io/dgrid.hpp"
#include "dasdn/metrics.hpp"

namespace dasdn::noise {

void validate(const RandomNoiseConfig& cfg) {
  if (cfg.lowpass_hz < 0.0) throw ConfigError("random noise low-pass corner must be positive");
  if (cfg.lowpass_hz > 0.0 && !(cfg.fs > 0.0)) throw ConfigError("sampling rate must be positive");
}

void validate(const ErraticConfig& cfg) {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(cfg.trace_prob) || !prob(cfg.burst_prob)) throw ConfigError("erratic probabilities must lie in [0, 1]");
  if (!(cfg.k > 1.0)) throw ConfigError("erratic amplitude scale k must exceed 1");
  if (cfg.burst_min == 0 || cfg.burst_min > cfg.burst_max) throw ConfigError("erratic burst length range is invalid");
  if (!(cfg.tail_index > 0.0)) throw ConfigError("erratic tail index must be positive");
}

void validate(const NoiseMix& mix) {
  if (mix.synthetic_fraction < 0.0 || mix.external_fraction < 0.0 ||
      std::abs(mix.synthetic_fraction + mix.external_fraction - 1.0) > 1e-9) {
    throw ConfigError("noise mix fractions must be non-negative and sum to 1");
  }
}

Grid2D gen_random_noise(std::size_t rows, std::size_t cols, const RandomNoiseConfig& cfg) {
  validate(cfg);
  Grid2D g(rows, cols);
  Rng rng(cfg.seed);
  for (double& v : g.values()) v = standard_normal(rng);
  if (cfg.lowpass_hz <= 0.0 || g.empty()) return g;

  const double fc = cfg.lowpass_hz;
  const double f_stop = 1.25 * fc;
  g = dsp::filter_traces(g, cfg.fs, [&](double f) {
    if (f <= fc) return 1.0;
    if (f >= f_stop) return 0.0;
    return 0.5 * (1.0 + std::cos(std::numbers::pi * (f - fc) / (f_stop - fc)));
  });
  const double r = metrics::rms(g);
  if (r > 0.0) {
    for (double& v : g.values()) v /= r;
  }
  return g;
}

Grid2D gen_erratic_noise(std::size_t rows, std::size_t cols, double clean_rms, const ErraticConfig& cfg) {
  validate(cfg);
  if (!(clean_rms > 0.0)) throw UsageError("gen_erratic_noise: clean RMS must be positive");
  Grid2D g(rows, cols);
  if (rows == 0) return g;
  Rng rng(cfg.seed);

  const std::size_t max_len = std::min(cfg.burst_max, rows);
  const std::size_t min_len = std::min(cfg.burst_min, max_len);
  const std::size_t windows = std::max<std::size_t>(1, rows / cfg.burst_max);
  std::vector<double> burst;

  for (std::size_t c = 0; c < cols; ++c) {
    if (uniform01(rng) >= cfg.trace_prob) continue;
    std::size_t count = 1;
    for (std::size_t w = 1; w < windows; ++w) count += uniform01(rng) < cfg.burst_prob ? 1 : 0;

    for (std::size_t b = 0; b < count; ++b) {
      const std::size_t len = min_len + uniform_index(rng, max_len - min_len + 1);
      const std::size_t start = uniform_index(rng, rows - len + 1);
      double u = uniform01(rng);
      while (u <= 0.0) u = uniform01(rng);
      const double peak = cfg.k * clean_rms * std::pow(u, -1.0 / cfg.tail_index);
      const double sign = uniform01(rng) < 0.5 ? -1.0 : 1.0;

      // White carrier under a Hann envelope, normalized to the drawn peak.
      burst.assign(len, 0.0);
      double max_abs = 0.0;
      for (std::size_t i = 0; i < len; ++i) {
        const double env =
            len > 1 ? 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(len - 1)))
                    : 1.0;
        burst[i] = env * standard_normal(rng);
        max_abs = std::max(max_abs, std::abs(burst[i]));
      }
      if (max_abs == 0.0) {
        burst[len / 2] = 1.0;
        max_abs = 1.0;
      }
      for (std::size_t i = 0; i < len; ++i) g(start + i, c) = sign * peak * burst[i] / max_abs;
    }
  }
  return g;
}

MixResult mix_to_snr(const Grid2D& clean, const Grid2D& noise, double target_db) {
  require_same_shape(clean, noise, "mix_to_snr");
  const double nn = metrics::norm(noise);
  if (nn == 0.0) throw UsageError("mix_to_snr: noise record is identically zero");
  const double s = metrics::norm(clean) / (nn * std::pow(10.0, target_db / 20.0));
  MixResult r{clean, s};
  auto out = r.noisy.values();
  const auto n = noise.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * n[i];
  return r;
}

Grid2D draw_pool_window(const std::vector<Grid2D>& pool, std::size_t rows, std::size_t cols, Rng& rng) {
  if (pool.empty()) throw UsageError("draw_pool_window: empty noise pool");
  const Grid2D& src = pool[uniform_index(rng, pool.size())];
  if (src.rows() < rows || src.cols() < cols) {
    throw ShapeError("draw_pool_window: pool record is smaller than the requested window");
  }
  const std::size_t r0 = uniform_index(rng, src.rows() - rows + 1);
  const std::size_t c0 = uniform_index(rng, src.cols() - cols + 1);
  Grid2D w(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) w(i, j) = src(r0 + i, c0 + j);
  }
  return w;
}

namespace {

void add_scaled_unit_energy(Grid2D& acc, const Grid2D& component, double fraction) {
  if (fraction == 0.0) return;
  const double n = metrics::norm(component);
  if (n == 0.0) return;
  const double w = std::sqrt(fraction) / n;
  auto a = acc.values();
  const auto c = component.values();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += w * c[i];
}

}  // namespace

Grid2D compose_noise(std::size_t rows, std::size_t cols, const NoiseMix& mix, const RandomNoiseConfig& random,
                     const ErraticConfig& erratic, double clean_rms) {
  validate(mix);
  Grid2D out(rows, cols);

  if (mix.synthetic_fraction > 0.0) {
    Grid2D synthetic = gen_random_noise(rows, cols, random);
    for (double& v : synthetic.values()) v *= clean_rms;
    const Grid2D bursts = gen_erratic_noise(rows, cols, clean_rms, erratic);
    for (std::size_t i = 0; i < synthetic.size(); ++i) synthetic.values()[i] += bursts.values()[i];
    add_scaled_unit_energy(out, synthetic, mix.synthetic_fraction);
  }

  if (mix.external_fraction > 0.0) {
    Grid2D external;
    if (!mix.external_pool.empty()) {
      Rng rng(mix_seed(erratic.seed, 0xE7u));
      external = draw_pool_window(mix.external_pool, rows, cols, rng);
    } else {
      std::clog << "note: no external noise pool supplied; using an erratic-noise surrogate for the "
                << mix.external_fraction * 100.0 << "% external share\n";
      ErraticConfig surrogate = erratic;
      surrogate.seed = mix_seed(erratic.seed, 0x5u);
      external = gen_erratic_noise(rows, cols, clean_rms, surrogate);
    }
    add_scaled_unit_energy(out, external, mix.external_fraction);
  }
  return out;
}

std::vector<Grid2D> load_noise_pool(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw UsageError("noise pool '" + dir.string() + "' is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".dgrid") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Grid2D> pool;
  for (const auto& f : files) pool.push_back(io::read_dgrid(f));
  return pool;
}

}  // namespace dasdn::noise
