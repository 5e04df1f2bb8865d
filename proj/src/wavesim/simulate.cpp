#include "dasdn/wavesim/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dasdn/wavesim/ricker.hpp"

namespace dasdn::wavesim {

double cfl_limit(double vp_max, double dx) {
  return 0.9 * dx / (vp_max * std::sqrt(2.0) * (std::abs(kC1) + std::abs(kC2)));
}

std::size_t auto_substeps(double dt_out, double vp_max, double dx) {
  const double n = std::ceil(dt_out / cfl_limit(vp_max, dx) - 1e-12);
  return static_cast<std::size_t>(std::max(1.0, n));
}

void validate(const SourceConfig& src, const VelocityModel& m) {
  if (!(src.f0 >= kF0Min && src.f0 <= kF0Max)) {
    throw ConfigError("source frequency " + std::to_string(src.f0) + " Hz is outside the modeling band [30, 75] Hz");
  }
  const double x = src.x < 0.0 ? static_cast<double>(m.width() - 1) / 2.0 : src.x;
  if (!(x >= 0.0 && x <= static_cast<double>(m.width() - 1) && src.z >= 0.0 &&
        src.z <= static_cast<double>(m.depth() - 1))) {
    throw ConfigError("source position lies outside the model");
  }
  if (src.t0 && *src.t0 < 0.0) throw ConfigError("source delay must be non-negative");
  if (!std::isfinite(src.amplitude)) throw ConfigError("source amplitude must be finite");
}

void validate(const SimConfig& cfg) {
  if (!(cfg.dt_out > 0.0)) throw ConfigError("output sampling interval must be positive");
  if (cfg.nt_out == 0) throw ConfigError("output sample count must be positive");
  if (cfg.sponge.damping < 0.0) throw ConfigError("sponge damping must be non-negative");
}

SimResult simulate(const VelocityModel& model, const SourceConfig& src, const SimConfig& cfg, Exec exec) {
  validate(model, false);
  validate(src, model);
  validate(cfg);

  const double vp_max = *std::max_element(model.vp.values().begin(), model.vp.values().end());
  const double limit = cfl_limit(vp_max, model.dx);
  std::size_t n_sub = cfg.substeps ? cfg.substeps : auto_substeps(cfg.dt_out, vp_max, model.dx);
  const double dt = cfg.dt_out / static_cast<double>(n_sub);
  if (dt > limit * (1.0 + 1e-9)) {
    throw ConfigError("time step " + std::to_string(dt) + " s exceeds the stability limit " + std::to_string(limit) +
                      " s; raise substeps");
  }

  const Medium md = Medium::from_model(model);
  const Field damp = sponge_factors(md.nz, md.nx, cfg.sponge);
  Wavefield w(md.nz, md.nx);

  // Vertical force at the nearest vz node, (iz + 1/2, ix).
  const auto ix = static_cast<std::ptrdiff_t>(std::lround(src.x < 0.0 ? (model.width() - 1) / 2.0 : src.x));
  const auto iz = static_cast<std::ptrdiff_t>(std::max(0.0, std::floor(src.z)));
  const double t0 = src.delay();
  const double force_scale = src.amplitude / (model.dx * model.dx);

  SimResult res;
  res.substeps = n_sub;
  res.dt_sim = dt;
  res.history = {Grid2D(cfg.nt_out, md.nx), Grid2D(cfg.nt_out, md.nx), cfg.dt_out, model.dx};
  const auto fdt = static_cast<float>(dt);

  std::size_t step = 0;
  for (std::size_t k = 0; k < cfg.nt_out; ++k) {
    for (std::size_t j = 0; j < md.nx; ++j) {
      const auto jj = static_cast<std::ptrdiff_t>(j);
      res.history.vx(k, j) = w.vx(0, jj);
      res.history.vz(k, j) = w.vz(0, jj);
    }
    if (cfg.track_energy) res.energy.push_back(field_energy(md, w));
    if (k + 1 == cfg.nt_out) break;

    for (std::size_t s = 0; s < n_sub; ++s, ++step) {
      update_velocity(md, w, fdt, exec);
      // Force evaluated at the half step, where the velocity update is centered.
      const double t = (static_cast<double>(step) + 0.5) * dt;
      w.vz(iz, ix) += static_cast<float>(dt * force_scale * ricker(src.f0, t, t0) * md.bz(iz, ix));
      update_stress(md, w, fdt, exec);
      image_free_surface(w);
      apply_sponge(damp, w, exec);
    }
    if (!all_finite(w)) {
      throw NumericError("wavefield became non-finite by time step " + std::to_string(step) + " (output sample " +
                         std::to_string(k + 1) + ")");
    }
  }

  res.gather = record_das(res.history, cfg.recording);
  return res;
}

ShotGather record_das(const SurfaceHistory& h, Recording mode) {
  ShotGather g;
  g.dt = h.dt;
  g.channel_spacing = h.dx;
  if (mode == Recording::particle_velocity) {
    g.data = h.vz;
    return g;
  }
  const std::size_t nc = h.vx.cols();
  if (nc < 3) throw UsageError("strain-rate recording needs at least 3 channels, got " + std::to_string(nc));
  g.data = Grid2D(h.vx.rows(), nc);
  for (std::size_t t = 0; t < h.vx.rows(); ++t) {
    const auto v = h.vx.row(t);
    auto out = g.data.row(t);
    out[0] = (v[1] - v[0]) / h.dx;
    for (std::size_t c = 1; c + 1 < nc; ++c) out[c] = (v[c + 1] - v[c - 1]) / (2.0 * h.dx);
    out[nc - 1] = (v[nc - 1] - v[nc - 2]) / h.dx;
  }
  return g;
}

}  // namespace dasdn::wavesim
