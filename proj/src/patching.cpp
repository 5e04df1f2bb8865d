#include "dasdn/patching.hpp"

#include <algorithm>
#include <string>

namespace dasdn::patching {

void validate(const PatchConfig& cfg) {
  if (cfg.size == 0) throw ConfigError("patch size must be positive");
  if (cfg.overlap >= cfg.size) throw ConfigError("patch overlap must be smaller than the patch size");
}

std::vector<std::size_t> window_starts(std::size_t extent, std::size_t size, std::size_t stride) {
  std::vector<std::size_t> starts;
  if (extent < size) return starts;
  for (std::size_t s = 0; s + size <= extent; s += stride) starts.push_back(s);
  if (starts.back() + size != extent) starts.push_back(extent - size);
  return starts;
}

PatchSet extract_patches(const Grid2D& data, const PatchConfig& cfg) {
  validate(cfg);
  const std::size_t c = cfg.size;
  if (data.rows() < c || data.cols() < c) {
    throw UsageError("extract_patches: record " + std::to_string(data.rows()) + "x" +
                     std::to_string(data.cols()) + " is smaller than one " + std::to_string(c) + "x" +
                     std::to_string(c) + " patch");
  }

  PatchSet out;
  out.size = c;
  out.source_rows = data.rows();
  out.source_cols = data.cols();
  const auto rows = window_starts(data.rows(), c, cfg.stride());
  const auto cols = window_starts(data.cols(), c, cfg.stride());
  for (std::size_t r : rows) {
    for (std::size_t q : cols) out.origins.push_back({r, q});
  }

  out.data.resize(out.origins.size() * c * c);
  const auto n = static_cast<std::ptrdiff_t>(out.origins.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const Origin o = out.origins[static_cast<std::size_t>(k)];
    double* dst = out.data.data() + static_cast<std::size_t>(k) * c * c;
    for (std::size_t i = 0; i < c; ++i) {
      const auto src = data.row(o.row + i).subspan(o.col, c);
      std::copy(src.begin(), src.end(), dst + i * c);
    }
  }
  return out;
}

namespace {

void check_integrity(const PatchSet& p) {
  if (p.size == 0 || p.source_rows < p.size || p.source_cols < p.size) {
    throw IntegrityError("reconstruct: patch size inconsistent with source dims");
  }
  if (p.data.size() != p.count() * p.patch_length()) {
    throw IntegrityError("reconstruct: payload length does not match patch count");
  }
  for (const auto& o : p.origins) {
    if (o.row + p.size > p.source_rows || o.col + p.size > p.source_cols) {
      throw IntegrityError("reconstruct: origin (" + std::to_string(o.row) + ", " + std::to_string(o.col) +
                           ") places a window outside the source");
    }
  }
}

}  // namespace

Grid2D coverage(const PatchSet& p) {
  check_integrity(p);
  Grid2D count(p.source_rows, p.source_cols);
  for (const auto& o : p.origins) {
    for (std::size_t i = 0; i < p.size; ++i) {
      for (std::size_t j = 0; j < p.size; ++j) count(o.row + i, o.col + j) += 1.0;
    }
  }
  return count;
}

Grid2D reconstruct(const PatchSet& p) {
  check_integrity(p);
  // Running mean per sample: identical overlapping values reproduce the
  // value exactly, which a sum-then-divide does not guarantee.
  Grid2D mean(p.source_rows, p.source_cols);
  Grid2D count(p.source_rows, p.source_cols);
  const std::size_t c = p.size;
  for (std::size_t k = 0; k < p.count(); ++k) {
    const Origin o = p.origins[k];
    const auto src = p.patch(k);
    for (std::size_t i = 0; i < c; ++i) {
      for (std::size_t j = 0; j < c; ++j) {
        double& m = mean(o.row + i, o.col + j);
        double& n = count(o.row + i, o.col + j);
        n += 1.0;
        m += (src[i * c + j] - m) / n;
      }
    }
  }
  for (double n : count.values()) {
    if (n == 0.0) throw IntegrityError("reconstruct: windows leave a sample uncovered");
  }
  return mean;
}

PatchSet concat(std::span<const PatchSet> sets) {
  PatchSet out;
  if (sets.empty()) return out;
  out.size = sets.front().size;
  out.source_rows = sets.front().source_rows;
  out.source_cols = sets.front().source_cols;
  for (const auto& s : sets) {
    if (s.size != out.size) throw ShapeError("concat: patch sets have different patch sizes");
    out.origins.insert(out.origins.end(), s.origins.begin(), s.origins.end());
    out.data.insert(out.data.end(), s.data.begin(), s.data.end());
  }
  return out;
}

}  // namespace dasdn::patching
