#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "dasdn/grid.hpp"

namespace dasdn::io {

// DGRID layout (little-endian):
//   "DASG"  u8 version(=1)  u32 rows  u32 cols  u8 dtype  payload (row-major)
// dtype 0 = float32, 1 = float64.

enum class DType : std::uint8_t { f32 = 0, f64 = 1 };

inline constexpr std::size_t kDgridHeaderSize = 14;
inline constexpr std::uint8_t kDgridVersion = 1;

std::vector<char> encode_dgrid(const Grid2D& g, DType dtype);
Grid2D decode_dgrid(const std::vector<char>& bytes, const std::string& context = "dgrid");

void write_dgrid(const std::filesystem::path& path, const Grid2D& g, DType dtype = DType::f32);
Grid2D read_dgrid(const std::filesystem::path& path);
/// The dtype code stored in an existing DGRID file.
DType dgrid_dtype(const std::filesystem::path& path);

/// Plain CSV, one grid row per line.
void write_csv(const std::filesystem::path& path, const Grid2D& g);
Grid2D read_csv(const std::filesystem::path& path);

/// Dispatch on extension: ".csv" uses CSV, anything else DGRID.
Grid2D read_grid(const std::filesystem::path& path);
void write_grid(const std::filesystem::path& path, const Grid2D& g, DType dtype = DType::f32);

}  // namespace dasdn::io
