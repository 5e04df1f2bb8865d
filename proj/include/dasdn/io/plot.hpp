#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "dasdn/grid.hpp"

namespace dasdn::io {

struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, one byte per pixel
};

/// Linear-interpolated percentile (0..100) of the grid's samples.
double percentile(const Grid2D& g, double p);

/// Amplitudes clipped to [p_lo, p_hi] percentiles, mapped linearly to 0..255.
/// A degenerate window (constant data) maps to mid-gray. Throws on NaN/Inf.
Image render_heatmap(const Grid2D& g, double p_lo = 2.0, double p_hi = 98.0);

/// Binary (P5) portable graymap.
void write_pgm(const std::filesystem::path& path, const Image& img);
void plot_heatmap(const Grid2D& g, const std::filesystem::path& path);

}  // namespace dasdn::io
