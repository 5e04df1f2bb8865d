#pragma once

#include <span>

#include "dasdn/cpunet/model.hpp"
#include "dasdn/exec.hpp"
#include "dasdn/grid.hpp"
#include "dasdn/patching.hpp"

namespace dasdn::cpunet {

/// Affine amplitude normalization applied before patching and undone after
/// reconstruction. Fitted on the training records and stored with the model.
struct Standardizer {
  double mean = 0.0;
  double scale = 1.0;

  /// Zero mean, unit population std over all samples of all records.
  static Standardizer fit(std::span<const Grid2D> records);
  static Standardizer fit(const Grid2D& record) { return fit(std::span<const Grid2D>(&record, 1)); }

  Grid2D apply(const Grid2D& g) const;
  Grid2D invert(const Grid2D& g) const;
};

/// Run the model over every patch of `patches` (eval mode) and return the
/// outputs with the same origins. Patches are processed in fixed-size chunks,
/// so the result is identical for any thread count.
patching::PatchSet predict_patches(const PatchModel& model, const patching::PatchSet& patches,
                                   Exec exec = Exec::parallel);

/// standardize -> extract -> predict -> reconstruct -> un-standardize.
Grid2D denoise_record(const PatchModel& model, const Grid2D& record, const patching::PatchConfig& cfg,
                      const Standardizer& stats, Exec exec = Exec::parallel);

/// Standardized training patches from one or more noisy records.
patching::PatchSet training_patches(std::span<const Grid2D> records, const patching::PatchConfig& cfg,
                                    const Standardizer& stats);

}  // namespace dasdn::cpunet
