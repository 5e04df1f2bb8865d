#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dasdn::nn {

/// A named, contiguous parameter array and its gradient buffer. Views only;
/// the owning layer must outlive it.
struct ParamBlock {
  std::string name;
  std::span<double> value;
  std::span<double> grad;
};

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

void validate(const AdamConfig& cfg);

struct AdamState {
  AdamConfig cfg;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
  std::uint64_t t = 0;

  AdamState() = default;
  AdamState(const AdamConfig& cfg, std::span<const ParamBlock> blocks);
};

/// One bias-corrected Adam update of every block. Grads are checked for
/// NaN/Inf before anything is modified; on failure NumericError names the block.
void adam_step(AdamState& state, std::span<const ParamBlock> blocks);

}  // namespace dasdn::nn
