#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dasdn/grid.hpp"

namespace dasdn::wavesim {

/// Forward-modeling bounds for P velocity and density.
inline constexpr double kVpMin = 1500.0;
inline constexpr double kVpMax = 4000.0;
inline constexpr double kRhoMin = 1900.0;
inline constexpr double kRhoMax = 2300.0;

/// Elastic properties on a regular grid; rows are depth, columns are x.
struct VelocityModel {
  Grid2D vp;   // m/s
  Grid2D vs;   // m/s
  Grid2D rho;  // kg/m^3
  double dx = 1.0;  // m, both axes

  std::size_t depth() const { return vp.rows(); }
  std::size_t width() const { return vp.cols(); }
};

/// Checks shapes, positivity, vs < vp and (when `enforce_ranges`) the
/// vp/rho bounds above. Throws ConfigError.
void validate(const VelocityModel& m, bool enforce_ranges = true);

enum class Geometry { flat, inclined, concave };

/// One layer, described by its top interface. The interface depth (in rows)
/// at column x is
///   flat:      top
///   inclined:  top + slope * x
///   concave:   top + sag * (1 - ((x - xc) / (width / 2))^2), xc = (width - 1) / 2
struct LayerSpec {
  Geometry geometry = Geometry::flat;
  double top = 0.0;
  double slope = 0.0;
  double sag = 0.0;
  double vp = 2000.0;
  std::optional<double> vs;  // defaults to vp / sqrt(3)
  double rho = 2000.0;

  double interface_depth(double x, std::size_t width) const;
};

struct ModelSpec {
  std::size_t width = 256;
  std::size_t depth = 512;
  double dx = 1.0;
  std::vector<LayerSpec> layers;  // shallowest first
};

/// Rasterizes the layers: cell (z, x) takes the properties of the deepest
/// layer whose interface lies at or above z. Throws ConfigError citing the
/// bounds for out-of-range properties.
VelocityModel build_layered_model(const ModelSpec& spec);

VelocityModel homogeneous_model(std::size_t depth, std::size_t width, double dx, double vp, double vs, double rho);

/// Model spec text: an optional [model] section (width, depth, dx) followed by
/// one [layer] section per layer (geometry, top, slope, sag, vp, vs, rho).
ModelSpec parse_model_spec(const std::string& text, const std::string& context = "model spec");
ModelSpec load_model_spec(const std::filesystem::path& path);

/// The layered model used by the synthetic benchmark: flat, inclined and
/// concave interfaces within the forward-modeling bounds.
ModelSpec benchmark_model_spec(std::size_t width = 256, std::size_t depth = 512);

}  // namespace dasdn::wavesim
