#pragma once

#include <cstddef>
#include <vector>

#include "dasdn/exec.hpp"
#include "dasdn/wavesim/model.hpp"

namespace dasdn::wavesim {

/// 4th-order staggered-grid coefficients.
inline constexpr float kC1 = 9.0f / 8.0f;
inline constexpr float kC2 = -1.0f / 24.0f;
inline constexpr std::ptrdiff_t kHalo = 2;

/// A float array over the model with a halo of kHalo cells on every side.
/// Indices (i, j) are (depth, x) and may run from -kHalo.
class Field {
 public:
  Field() = default;
  Field(std::size_t nz, std::size_t nx)
      : nz_(nz), nx_(nx), stride_(nx + 2 * kHalo), data_((nz + 2 * kHalo) * (nx + 2 * kHalo), 0.0f) {}

  float& operator()(std::ptrdiff_t i, std::ptrdiff_t j) { return data_[index(i, j)]; }
  float operator()(std::ptrdiff_t i, std::ptrdiff_t j) const { return data_[index(i, j)]; }

  std::size_t nz() const { return nz_; }
  std::size_t nx() const { return nx_; }
  std::vector<float>& raw() { return data_; }
  const std::vector<float>& raw() const { return data_; }

 private:
  std::size_t index(std::ptrdiff_t i, std::ptrdiff_t j) const {
    return static_cast<std::size_t>(i + kHalo) * stride_ + static_cast<std::size_t>(j + kHalo);
  }
  std::size_t nz_ = 0;
  std::size_t nx_ = 0;
  std::size_t stride_ = 0;
  std::vector<float> data_;
};

/// Material coefficients sampled where each update needs them.
///   txx, tzz at (i, j); vx at (i, j+1/2); vz at (i+1/2, j); txz at (i+1/2, j+1/2).
struct Medium {
  std::size_t nz = 0, nx = 0;
  float dx = 1.0f;
  Field lam2mu, lam, mu;  // at (i, j)
  Field mu_xz;            // harmonic mean at (i+1/2, j+1/2)
  Field bx, bz;           // buoyancy 1/rho at the velocity nodes
  Field rho;
  Field surface_mod;      // 4 mu (lam + mu) / (lam + 2 mu), free-surface txx modulus

  static Medium from_model(const VelocityModel& m);
};

struct Wavefield {
  Field vx, vz, txx, tzz, txz;
  Wavefield() = default;
  Wavefield(std::size_t nz, std::size_t nx) : vx(nz, nx), vz(nz, nx), txx(nz, nx), tzz(nz, nx), txz(nz, nx) {}
};

/// Cerjan taper on the left, right and bottom edges; the top is a free surface.
struct Sponge {
  std::size_t width = 20;
  double damping = 0.015;
};

/// Per-cell multiplicative damping factors for a sponge.
Field sponge_factors(std::size_t nz, std::size_t nx, const Sponge& s);

void update_velocity(const Medium& md, Wavefield& w, float dt, Exec exec);
void update_stress(const Medium& md, Wavefield& w, float dt, Exec exec);
/// Stress images above the free surface (row 0 carries tzz = 0).
void image_free_surface(Wavefield& w);
void apply_sponge(const Field& factors, Wavefield& w, Exec exec);

/// Kinetic plus strain energy per unit thickness, summed over the grid.
double field_energy(const Medium& md, const Wavefield& w);

bool all_finite(const Wavefield& w);

}  // namespace dasdn::wavesim
