#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "dasdn/grid.hpp"
#include "dasdn/random.hpp"

namespace dasdn::noise {

struct RandomNoiseConfig {
  std::uint64_t seed = 0;
  double lowpass_hz = 0.0;  // 0 disables shaping
  double fs = 1000.0;       // sampling rate of the time axis, Hz
};

/// Impulsive, trace-localized bursts. Defaults are implementation choices.
struct ErraticConfig {
  double trace_prob = 0.05;      // probability a trace carries bursts
  double burst_prob = 0.2;       // extra-burst probability per burst_max window
  std::size_t burst_min = 20;    // samples
  std::size_t burst_max = 200;   // samples
  double k = 5.0;                // minimum peak, in units of clean RMS
  double tail_index = 1.5;       // Pareto shape of the peak amplitude
  std::uint64_t seed = 0;
};

struct NoiseMix {
  double synthetic_fraction = 0.85;
  double external_fraction = 0.15;
  std::vector<Grid2D> external_pool;  // optional user-supplied noise records
};

void validate(const RandomNoiseConfig& cfg);
void validate(const ErraticConfig& cfg);
void validate(const NoiseMix& mix);

/// i.i.d. unit-variance Gaussian samples; with shaping, each trace is low-pass
/// filtered (raised-cosine roll-off from the corner to 1.25x the corner) and
/// the whole grid rescaled to unit variance.
Grid2D gen_random_noise(std::size_t rows, std::size_t cols, const RandomNoiseConfig& cfg);

/// Zero except on randomly selected traces, each of which gets at least one
/// burst of length [burst_min, burst_max] whose peak magnitude is
/// k * clean_rms * U^(-1/tail_index) >= k * clean_rms. Later bursts overwrite
/// earlier ones where they overlap.
Grid2D gen_erratic_noise(std::size_t rows, std::size_t cols, double clean_rms, const ErraticConfig& cfg);

struct MixResult {
  Grid2D noisy;
  double scale = 0.0;
};

/// clean + s * noise with s chosen so the standard S/N equals target_db:
/// s = |clean| / (|noise| 10^(target/20)).
MixResult mix_to_snr(const Grid2D& clean, const Grid2D& noise, double target_db);

/// A rows x cols window copied verbatim from a randomly chosen pool record.
Grid2D draw_pool_window(const std::vector<Grid2D>& pool, std::size_t rows, std::size_t cols, Rng& rng);

/// Blend of a synthetic component (clean_rms * Gaussian + erratic) and an
/// external component (pool window, or an independent erratic surrogate when
/// the pool is empty). Each component is normalized to unit energy and
/// weighted by sqrt(fraction), so component energies split as the fractions.
Grid2D compose_noise(std::size_t rows, std::size_t cols, const NoiseMix& mix, const RandomNoiseConfig& random,
                     const ErraticConfig& erratic, double clean_rms);

/// All DGRID files in a directory, sorted by file name.
std::vector<Grid2D> load_noise_pool(const std::filesystem::path& dir);

}  // namespace dasdn::noise
