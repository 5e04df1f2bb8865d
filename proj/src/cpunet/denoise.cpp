#include "dasdn/cpunet/denoise.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "dasdn/error.hpp"

namespace dasdn::cpunet {

namespace {

constexpr std::size_t kChunk = 64;

}  // namespace

Standardizer Standardizer::fit(std::span<const Grid2D> records) {
  double n = 0.0;
  double sum = 0.0;
  for (const auto& r : records) {
    for (double v : r.values()) sum += v;
    n += static_cast<double>(r.size());
  }
  if (n == 0.0) throw UsageError("Standardizer::fit: no samples");
  const double mean = sum / n;
  double ss = 0.0;
  for (const auto& r : records) {
    for (double v : r.values()) ss += (v - mean) * (v - mean);
  }
  const double sd = std::sqrt(ss / n);
  return {mean, sd > 0.0 ? sd : 1.0};
}

Grid2D Standardizer::apply(const Grid2D& g) const {
  Grid2D out = g;
  for (double& v : out.values()) v = (v - mean) / scale;
  return out;
}

Grid2D Standardizer::invert(const Grid2D& g) const {
  Grid2D out = g;
  for (double& v : out.values()) v = v * scale + mean;
  return out;
}

patching::PatchSet predict_patches(const PatchModel& model, const patching::PatchSet& patches, Exec exec) {
  const auto dim = static_cast<Eigen::Index>(patches.patch_length());
  if (dim != model.input_dim()) {
    throw ShapeError("predict_patches: patch length " + std::to_string(dim) + " does not match model input width " +
                     std::to_string(model.input_dim()));
  }
  patching::PatchSet out = patches;
  const std::size_t n = patches.count();
  const auto chunks = static_cast<std::ptrdiff_t>((n + kChunk - 1) / kChunk);

  auto run_chunk = [&](std::ptrdiff_t c) {
    const std::size_t start = static_cast<std::size_t>(c) * kChunk;
    const auto m = static_cast<Eigen::Index>(std::min(kChunk, n - start));
    const Eigen::Map<const Matrix> in(patches.data.data() + start * patches.patch_length(), dim, m);
    Eigen::Map<Matrix> dst(out.data.data() + start * patches.patch_length(), dim, m);
    dst = model.predict(in);
  };

  if (exec == Exec::serial) {
    for (std::ptrdiff_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t c = 0; c < chunks; ++c) run_chunk(c);
  }
  return out;
}

Grid2D denoise_record(const PatchModel& model, const Grid2D& record, const patching::PatchConfig& cfg,
                      const Standardizer& stats, Exec exec) {
  if (record.rows() < cfg.size || record.cols() < cfg.size) {
    throw UsageError("denoise_record: record " + std::to_string(record.rows()) + "x" +
                     std::to_string(record.cols()) + " is smaller than one patch");
  }
  const auto patches = patching::extract_patches(stats.apply(record), cfg);
  return stats.invert(patching::reconstruct(predict_patches(model, patches, exec)));
}

patching::PatchSet training_patches(std::span<const Grid2D> records, const patching::PatchConfig& cfg,
                                    const Standardizer& stats) {
  std::vector<patching::PatchSet> sets;
  sets.reserve(records.size());
  for (const auto& r : records) sets.push_back(patching::extract_patches(stats.apply(r), cfg));
  return patching::concat(sets);
}

}  // namespace dasdn::cpunet
