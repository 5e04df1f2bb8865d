#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dasdn/baselines.hpp"
#include "dasdn/cpunet/network.hpp"
#include "dasdn/cpunet/trainer.hpp"
#include "dasdn/noise.hpp"
#include "dasdn/patching.hpp"
#include "dasdn/wavesim/simulate.hpp"

namespace dasdn {

/// Everything a pipeline run needs. Built from defaults, then a config file,
/// then environment overrides, then command-line flags; later sources win.
///
/// File format: `[section]` headers with `key = value` lines. Sections are
/// run, model, simulation, noise, patching, training and baselines; every key
/// is also reachable from the command line as `--set section.key=value`.
struct RunConfig {
  std::uint64_t seed = 0;
  int threads = 0;  // 0 keeps the OpenMP default

  std::optional<std::filesystem::path> model_spec;  // benchmark model when absent
  std::size_t model_width = 256;
  std::size_t model_depth = 512;

  wavesim::SourceConfig source;
  wavesim::SimConfig sim;

  double target_snr = 0.5;
  noise::RandomNoiseConfig random;
  noise::ErraticConfig erratic;
  double synthetic_fraction = 0.85;
  double external_fraction = 0.15;
  std::optional<std::filesystem::path> noise_pool;

  patching::PatchConfig patch;
  std::size_t train_overlap = 0;  // overlap used to cut training patches
  std::string preset = "synthetic";
  nn::UnitConfig unit;
  cpunet::TrainConfig train;

  baselines::BandpassConfig bandpass;
  baselines::MedianConfig median;

  /// The settings the synthetic benchmark runs with: defaults plus overlapping
  /// patches (24 at inference, 36 for training) and no dropout.
  static RunConfig benchmark();

  /// Applies one setting. Unknown sections or keys throw ConfigError naming
  /// `origin`; malformed values throw FormatError.
  void set(const std::string& section, const std::string& key, const std::string& value,
           const std::string& origin = "command line");
  /// `section.key=value`.
  void set_assignment(const std::string& assignment, const std::string& origin = "command line");

  void load_file(const std::filesystem::path& path);
  void apply_environment();

  /// Checks every module's invariants.
  void validate() const;

  cpunet::CPUNetConfig network() const;
  cpunet::TrainConfig training() const;
  patching::PatchConfig training_patch() const { return {patch.size, train_overlap}; }
  noise::NoiseMix mix() const { return {synthetic_fraction, external_fraction, {}}; }

  /// Seeds for the independent random streams, all derived from `seed`.
  std::uint64_t noise_seed() const;
  std::uint64_t erratic_seed() const;
  std::uint64_t model_seed() const;
  std::uint64_t shuffle_seed() const;

  /// All settings in file form; loading the output reproduces this config.
  std::string dump() const;
};

}  // namespace dasdn
