#include "dasdn/wavesim/model.hpp"

#include <cmath>
#include <sstream>

#include "dasdn/io/keyvalue.hpp"

namespace dasdn::wavesim {

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

void check_range(const char* what, double v, double lo, double hi) {
  if (!(v >= lo && v <= hi)) {
    throw ConfigError(std::string(what) + " = " + fmt(v) + " is outside the modeling range [" + fmt(lo) + ", " +
                      fmt(hi) + "]");
  }
}

}  // namespace

void validate(const VelocityModel& m, bool enforce_ranges) {
  if (m.vp.empty() || !m.vp.same_shape(m.vs) || !m.vp.same_shape(m.rho)) {
    throw ConfigError("velocity model grids are empty or differ in shape");
  }
  if (!(m.dx > 0.0)) throw ConfigError("velocity model grid step must be positive");
  for (std::size_t i = 0; i < m.vp.size(); ++i) {
    const double vp = m.vp.values()[i];
    const double vs = m.vs.values()[i];
    const double rho = m.rho.values()[i];
    if (!(vp > 0.0 && vs > 0.0 && rho > 0.0)) throw ConfigError("velocity model has non-positive properties");
    if (!(vs < vp)) throw ConfigError("velocity model has vs >= vp");
    if (enforce_ranges) {
      check_range("vp", vp, kVpMin, kVpMax);
      check_range("rho", rho, kRhoMin, kRhoMax);
    }
  }
}

double LayerSpec::interface_depth(double x, std::size_t width) const {
  switch (geometry) {
    case Geometry::flat:
      return top;
    case Geometry::inclined:
      return top + slope * x;
    case Geometry::concave: {
      const double xc = (static_cast<double>(width) - 1.0) / 2.0;
      const double half = static_cast<double>(width) / 2.0;
      const double u = (x - xc) / half;
      return top + sag * (1.0 - u * u);
    }
  }
  return top;
}

VelocityModel build_layered_model(const ModelSpec& spec) {
  if (spec.layers.empty()) throw ConfigError("model spec has no layers");
  if (spec.width == 0 || spec.depth == 0) throw ConfigError("model dimensions must be positive");
  for (std::size_t k = 0; k < spec.layers.size(); ++k) {
    const auto& l = spec.layers[k];
    const double vs = l.vs.value_or(l.vp / std::sqrt(3.0));
    check_range("vp", l.vp, kVpMin, kVpMax);
    check_range("rho", l.rho, kRhoMin, kRhoMax);
    if (!(vs > 0.0 && vs < l.vp)) throw ConfigError("layer " + std::to_string(k + 1) + ": vs must lie in (0, vp)");
  }

  VelocityModel m{Grid2D(spec.depth, spec.width), Grid2D(spec.depth, spec.width), Grid2D(spec.depth, spec.width),
                  spec.dx};
  for (std::size_t x = 0; x < spec.width; ++x) {
    for (std::size_t z = 0; z < spec.depth; ++z) {
      // The first layer fills everything above the deeper interfaces.
      const LayerSpec* chosen = &spec.layers.front();
      for (const auto& l : spec.layers) {
        if (static_cast<double>(z) >= std::round(l.interface_depth(static_cast<double>(x), spec.width))) chosen = &l;
      }
      m.vp(z, x) = chosen->vp;
      m.vs(z, x) = chosen->vs.value_or(chosen->vp / std::sqrt(3.0));
      m.rho(z, x) = chosen->rho;
    }
  }
  return m;
}

VelocityModel homogeneous_model(std::size_t depth, std::size_t width, double dx, double vp, double vs, double rho) {
  return {Grid2D(depth, width, vp), Grid2D(depth, width, vs), Grid2D(depth, width, rho), dx};
}

ModelSpec parse_model_spec(const std::string& text, const std::string& context) {
  ModelSpec spec;
  for (const auto& sec : io::parse_sections(text, context)) {
    if (sec.name == "model") {
      for (const auto& kv : sec.entries) {
        if (kv.key == "width") {
          spec.width = static_cast<std::size_t>(io::parse_int(kv, context));
        } else if (kv.key == "depth") {
          spec.depth = static_cast<std::size_t>(io::parse_int(kv, context));
        } else if (kv.key == "dx") {
          spec.dx = io::parse_double(kv, context);
        } else {
          throw ConfigError(context + ":" + std::to_string(kv.line) + ": unknown model key '" + kv.key + "'");
        }
      }
    } else if (sec.name == "layer") {
      LayerSpec l;
      for (const auto& kv : sec.entries) {
        if (kv.key == "geometry") {
          if (kv.value == "flat") {
            l.geometry = Geometry::flat;
          } else if (kv.value == "inclined") {
            l.geometry = Geometry::inclined;
          } else if (kv.value == "concave") {
            l.geometry = Geometry::concave;
          } else {
            throw ConfigError(context + ":" + std::to_string(kv.line) + ": geometry must be flat, inclined or concave");
          }
        } else if (kv.key == "top") {
          l.top = io::parse_double(kv, context);
        } else if (kv.key == "slope") {
          l.slope = io::parse_double(kv, context);
        } else if (kv.key == "sag") {
          l.sag = io::parse_double(kv, context);
        } else if (kv.key == "vp") {
          l.vp = io::parse_double(kv, context);
        } else if (kv.key == "vs") {
          l.vs = io::parse_double(kv, context);
        } else if (kv.key == "rho") {
          l.rho = io::parse_double(kv, context);
        } else {
          throw ConfigError(context + ":" + std::to_string(kv.line) + ": unknown layer key '" + kv.key + "'");
        }
      }
      spec.layers.push_back(l);
    } else {
      throw ConfigError(context + ":" + std::to_string(sec.line) + ": unknown section [" + sec.name + "]");
    }
  }
  return spec;
}

ModelSpec load_model_spec(const std::filesystem::path& path) {
  ModelSpec spec;
  const auto sections = io::load_sections(path);
  std::ostringstream text;
  // Re-serializing keeps a single parsing path.
  for (const auto& s : sections) {
    text << '[' << s.name << "]\n";
    for (const auto& kv : s.entries) text << kv.key << " = " << kv.value << '\n';
  }
  return parse_model_spec(text.str(), path.string());
}

ModelSpec benchmark_model_spec(std::size_t width, std::size_t depth) {
  ModelSpec s;
  s.width = width;
  s.depth = depth;
  const double d = static_cast<double>(depth);
  s.layers = {
      {Geometry::flat, 0.0, 0.0, 0.0, 1800.0, std::nullopt, 1950.0},
      {Geometry::flat, 0.16 * d, 0.0, 0.0, 2200.0, std::nullopt, 2050.0},
      {Geometry::inclined, 0.30 * d, 0.25, 0.0, 2700.0, std::nullopt, 2150.0},
      {Geometry::concave, 0.55 * d, 0.0, 0.12 * d, 3200.0, std::nullopt, 2250.0},
  };
  return s;
}

}  // namespace dasdn::wavesim
