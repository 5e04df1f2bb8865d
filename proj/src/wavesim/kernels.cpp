#include "dasdn/wavesim/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace dasdn::wavesim {

namespace {

using Idx = std::ptrdiff_t;

template <class RowFn>
void for_rows(std::size_t nz, Exec exec, RowFn&& fn) {
  const auto n = static_cast<Idx>(nz);
  if (exec == Exec::serial) {
    for (Idx i = 0; i < n; ++i) fn(i);
  } else {
#pragma omp parallel for schedule(static)
    for (Idx i = 0; i < n; ++i) fn(i);
  }
}

// Forward (+) differences land half a cell ahead of the node, backward (-)
// half a cell behind.
inline float dxp(const Field& f, Idx i, Idx j) {
  return kC1 * (f(i, j + 1) - f(i, j)) + kC2 * (f(i, j + 2) - f(i, j - 1));
}
inline float dxm(const Field& f, Idx i, Idx j) {
  return kC1 * (f(i, j) - f(i, j - 1)) + kC2 * (f(i, j + 1) - f(i, j - 2));
}
inline float dzp(const Field& f, Idx i, Idx j) {
  return kC1 * (f(i + 1, j) - f(i, j)) + kC2 * (f(i + 2, j) - f(i - 1, j));
}
inline float dzm(const Field& f, Idx i, Idx j) {
  return kC1 * (f(i, j) - f(i - 1, j)) + kC2 * (f(i + 1, j) - f(i - 2, j));
}

}  // namespace

Medium Medium::from_model(const VelocityModel& m) {
  validate(m, false);
  Medium md;
  md.nz = m.depth();
  md.nx = m.width();
  md.dx = static_cast<float>(m.dx);
  for (Field* f : {&md.lam2mu, &md.lam, &md.mu, &md.mu_xz, &md.bx, &md.bz, &md.rho, &md.surface_mod}) {
    *f = Field(md.nz, md.nx);
  }
  const auto nz = static_cast<Idx>(md.nz);
  const auto nx = static_cast<Idx>(md.nx);
  auto clampz = [&](Idx i) { return static_cast<std::size_t>(std::min(i, nz - 1)); };
  auto clampx = [&](Idx j) { return static_cast<std::size_t>(std::min(j, nx - 1)); };
  auto mu_at = [&](std::size_t i, std::size_t j) { return m.rho(i, j) * m.vs(i, j) * m.vs(i, j); };

  for (Idx i = 0; i < nz; ++i) {
    for (Idx j = 0; j < nx; ++j) {
      const auto zi = static_cast<std::size_t>(i);
      const auto xj = static_cast<std::size_t>(j);
      const double rho = m.rho(zi, xj);
      const double mu = mu_at(zi, xj);
      const double l2m = rho * m.vp(zi, xj) * m.vp(zi, xj);
      const double lam = l2m - 2.0 * mu;
      md.rho(i, j) = static_cast<float>(rho);
      md.mu(i, j) = static_cast<float>(mu);
      md.lam(i, j) = static_cast<float>(lam);
      md.lam2mu(i, j) = static_cast<float>(l2m);
      md.surface_mod(i, j) = static_cast<float>(4.0 * mu * (lam + mu) / l2m);
      md.bx(i, j) = static_cast<float>(2.0 / (rho + m.rho(zi, clampx(j + 1))));
      md.bz(i, j) = static_cast<float>(2.0 / (rho + m.rho(clampz(i + 1), xj)));
      const double inv = 1.0 / mu + 1.0 / mu_at(clampz(i + 1), xj) + 1.0 / mu_at(zi, clampx(j + 1)) +
                         1.0 / mu_at(clampz(i + 1), clampx(j + 1));
      md.mu_xz(i, j) = static_cast<float>(4.0 / inv);
    }
  }
  return md;
}

Field sponge_factors(std::size_t nz, std::size_t nx, const Sponge& s) {
  Field g(nz, nx);
  const auto w = static_cast<double>(s.width);
  auto taper = [&](double dist) {
    if (dist >= w) return 1.0;
    const double a = s.damping * (w - dist);
    return std::exp(-a * a);
  };
  for (std::size_t i = 0; i < nz; ++i) {
    const double gz = taper(static_cast<double>(nz - 1 - i));
    for (std::size_t j = 0; j < nx; ++j) {
      const double gx = taper(static_cast<double>(std::min(j, nx - 1 - j)));
      g(static_cast<Idx>(i), static_cast<Idx>(j)) = static_cast<float>(gz * gx);
    }
  }
  return g;
}

void update_velocity(const Medium& md, Wavefield& w, float dt, Exec exec) {
  const float k = dt / md.dx;
  const auto nx = static_cast<Idx>(md.nx);
  for_rows(md.nz, exec, [&](Idx i) {
    for (Idx j = 0; j < nx; ++j) {
      w.vx(i, j) += k * md.bx(i, j) * (dxp(w.txx, i, j) + dzm(w.txz, i, j));
      w.vz(i, j) += k * md.bz(i, j) * (dxm(w.txz, i, j) + dzp(w.tzz, i, j));
    }
  });
}

void update_stress(const Medium& md, Wavefield& w, float dt, Exec exec) {
  const float k = dt / md.dx;
  const auto nx = static_cast<Idx>(md.nx);
  for_rows(md.nz, exec, [&](Idx i) {
    for (Idx j = 0; j < nx; ++j) {
      const float exx = dxm(w.vx, i, j);
      if (i == 0) {
        // tzz vanishes on the surface, which eliminates dvz/dz from txx.
        w.txx(i, j) += k * md.surface_mod(i, j) * exx;
        w.tzz(i, j) = 0.0f;
      } else {
        const float ezz = i == 1 ? w.vz(1, j) - w.vz(0, j) : dzm(w.vz, i, j);
        w.txx(i, j) += k * (md.lam2mu(i, j) * exx + md.lam(i, j) * ezz);
        w.tzz(i, j) += k * (md.lam(i, j) * exx + md.lam2mu(i, j) * ezz);
      }
      const float dvx = i == 0 ? w.vx(1, j) - w.vx(0, j) : dzp(w.vx, i, j);
      w.txz(i, j) += k * md.mu_xz(i, j) * (dvx + dxp(w.vz, i, j));
    }
  });
}

void image_free_surface(Wavefield& w) {
  const auto nx = static_cast<Idx>(w.tzz.nx());
  for (Idx j = -kHalo; j < nx + kHalo; ++j) {
    w.tzz(-1, j) = -w.tzz(1, j);
    w.tzz(-2, j) = -w.tzz(2, j);
    w.txz(-1, j) = -w.txz(0, j);
    w.txz(-2, j) = -w.txz(1, j);
  }
}

void apply_sponge(const Field& g, Wavefield& w, Exec exec) {
  const auto nx = static_cast<Idx>(g.nx());
  for_rows(g.nz(), exec, [&](Idx i) {
    for (Idx j = 0; j < nx; ++j) {
      const float f = g(i, j);
      if (f == 1.0f) continue;
      w.vx(i, j) *= f;
      w.vz(i, j) *= f;
      w.txx(i, j) *= f;
      w.tzz(i, j) *= f;
      w.txz(i, j) *= f;
    }
  });
}

double field_energy(const Medium& md, const Wavefield& w) {
  const auto nz = static_cast<Idx>(md.nz);
  const auto nx = static_cast<Idx>(md.nx);
  double total = 0.0;
  for (Idx i = 0; i < nz; ++i) {
    double row = 0.0;
    for (Idx j = 0; j < nx; ++j) {
      const double vx = w.vx(i, j), vz = w.vz(i, j);
      const double sxx = w.txx(i, j), szz = w.tzz(i, j), sxz = w.txz(i, j);
      const double mu = md.mu(i, j), lam = md.lam(i, j), l2m = md.lam2mu(i, j);
      row += 0.5 * md.rho(i, j) * (vx * vx + vz * vz);
      row += (l2m * (sxx * sxx + szz * szz) - 2.0 * lam * sxx * szz) / (8.0 * mu * (lam + mu));
      row += sxz * sxz / (2.0 * md.mu_xz(i, j));
    }
    total += row;
  }
  return total * static_cast<double>(md.dx) * static_cast<double>(md.dx);
}

bool all_finite(const Wavefield& w) {
  for (const Field* f : {&w.vx, &w.vz, &w.txx, &w.tzz, &w.txz}) {
    for (float v : f->raw()) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

}  // namespace dasdn::wavesim
