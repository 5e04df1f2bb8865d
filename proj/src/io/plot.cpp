#include "dasdn/io/plot.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dasdn/io/binary.hpp"

namespace dasdn::io {

double percentile(const Grid2D& g, double p) {
  if (g.empty()) throw UsageError("percentile of an empty grid");
  std::vector<double> v(g.values().begin(), g.values().end());
  std::sort(v.begin(), v.end());
  const double pos = std::clamp(p, 0.0, 100.0) / 100.0 * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

Image render_heatmap(const Grid2D& g, double p_lo, double p_hi) {
  for (double v : g.values()) {
    if (!std::isfinite(v)) throw NumericError("plot: grid contains non-finite values");
  }
  Image img{g.cols(), g.rows(), std::vector<std::uint8_t>(g.size(), 128)};
  if (g.empty()) return img;
  const double lo = percentile(g, p_lo);
  const double hi = percentile(g, p_hi);
  if (!(hi > lo)) return img;
  const auto src = g.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double t = (std::clamp(src[i], lo, hi) - lo) / (hi - lo);
    img.pixels[i] = static_cast<std::uint8_t>(std::lround(t * 255.0));
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const Image& img) {
  const std::string header =
      "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  std::vector<char> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels.begin(), img.pixels.end());
  write_file_atomic(path, out);
}

void plot_heatmap(const Grid2D& g, const std::filesystem::path& path) { write_pgm(path, render_heatmap(g)); }

}  // namespace dasdn::io
