#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dasdn/grid.hpp"

namespace dasdn::patching {

/// Square windows of side `size` placed every `size - overlap` samples.
struct PatchConfig {
  std::size_t size = 48;
  std::size_t overlap = 0;

  std::size_t stride() const { return size - overlap; }
};

void validate(const PatchConfig& cfg);

struct Origin {
  std::size_t row = 0;
  std::size_t col = 0;

  friend bool operator==(const Origin&, const Origin&) = default;
};

/// Flattened (row-major) windows of a record plus where they came from.
/// Patch k occupies data[k * size * size, (k + 1) * size * size).
struct PatchSet {
  std::size_t size = 0;
  std::size_t source_rows = 0;
  std::size_t source_cols = 0;
  std::vector<Origin> origins;
  std::vector<double> data;

  std::size_t count() const { return origins.size(); }
  std::size_t patch_length() const { return size * size; }
  std::span<double> patch(std::size_t k) { return {data.data() + k * patch_length(), patch_length()}; }
  std::span<const double> patch(std::size_t k) const {
    return {data.data() + k * patch_length(), patch_length()};
  }
};

/// Window start offsets along one axis: multiples of `stride`, plus one
/// window flush with the far edge when the last stride does not land there.
std::vector<std::size_t> window_starts(std::size_t extent, std::size_t size, std::size_t stride);

PatchSet extract_patches(const Grid2D& data, const PatchConfig& cfg);

/// Overlap-averaged inverse of extract_patches. Accumulates in patch order,
/// so the result does not depend on how the patches were produced.
Grid2D reconstruct(const PatchSet& patches);

/// Number of windows covering each sample.
Grid2D coverage(const PatchSet& patches);

/// Concatenate several patch sets (e.g. from multiple records) for training.
/// The result's source dims are those of the first set; it is not reconstructible.
PatchSet concat(std::span<const PatchSet> sets);

}  // namespace dasdn::patching
