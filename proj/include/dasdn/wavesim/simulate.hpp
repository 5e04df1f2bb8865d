#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dasdn/exec.hpp"
#include "dasdn/grid.hpp"
#include "dasdn/wavesim/kernels.hpp"
#include "dasdn/wavesim/model.hpp"

namespace dasdn::wavesim {

inline constexpr double kF0Min = 30.0;
inline constexpr double kF0Max = 75.0;

struct SourceConfig {
  double f0 = 50.0;                 // Hz
  double x = -1.0;                  // grid columns; negative selects the center
  double z = 5.0;                   // grid rows below the surface
  std::optional<double> t0;         // s; defaults to 1.2 / f0
  double amplitude = 1.0;

  double delay() const { return t0.value_or(1.2 / f0); }
};

enum class Recording { particle_velocity, strain_rate };

struct SimConfig {
  double dt_out = 0.001;
  std::size_t nt_out = 512;
  std::size_t substeps = 0;  // 0 selects the smallest count satisfying the CFL bound
  Sponge sponge;
  Recording recording = Recording::strain_rate;
  bool track_energy = false;
};

/// Surface velocities sampled at dt_out, one column per channel.
struct SurfaceHistory {
  Grid2D vx;
  Grid2D vz;
  double dt = 0.0;
  double dx = 1.0;
};

struct ShotGather {
  Grid2D data;  // time x channels
  double dt = 0.0;
  double channel_spacing = 1.0;
};

struct SimResult {
  ShotGather gather;
  SurfaceHistory history;
  std::size_t substeps = 0;
  double dt_sim = 0.0;
  std::vector<double> energy;  // one value per output sample when tracked
};

/// Largest stable step for the 4th-order scheme with a safety factor of 0.9.
double cfl_limit(double vp_max, double dx);
/// Internal steps per output sample so that dt_out / n stays under cfl_limit.
std::size_t auto_substeps(double dt_out, double vp_max, double dx);

void validate(const SourceConfig& src, const VelocityModel& m);
void validate(const SimConfig& cfg);

/// Velocity-stress P-SV time stepping with a free surface on top and sponges
/// elsewhere. Receivers sit on the surface, one per model column. Throws
/// NumericError naming the step index if the field stops being finite.
SimResult simulate(const VelocityModel& model, const SourceConfig& src, const SimConfig& cfg,
                   Exec exec = Exec::parallel);

inline ShotGather simulate_shot(const VelocityModel& model, const SourceConfig& src, const SimConfig& cfg,
                                Exec exec = Exec::parallel) {
  return simulate(model, src, cfg, exec).gather;
}

/// particle_velocity: vz passes through. strain_rate: centered difference of
/// vx across channels, one-sided at the ends; needs at least 3 channels.
ShotGather record_das(const SurfaceHistory& h, Recording mode);

}  // namespace dasdn::wavesim
