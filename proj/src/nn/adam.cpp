#include "dasdn/nn/adam.hpp"

#include <cmath>

#include "dasdn/error.hpp"

namespace dasdn::nn {

void validate(const AdamConfig& cfg) {
  if (!(cfg.lr >= 0.0)) throw ConfigError("Adam learning rate must be non-negative");
  if (!(cfg.beta1 > 0.0 && cfg.beta1 < 1.0)) throw ConfigError("Adam beta1 must lie in (0, 1)");
  if (!(cfg.beta2 > 0.0 && cfg.beta2 < 1.0)) throw ConfigError("Adam beta2 must lie in (0, 1)");
  if (!(cfg.eps > 0.0)) throw ConfigError("Adam eps must be positive");
}

AdamState::AdamState(const AdamConfig& c, std::span<const ParamBlock> blocks) : cfg(c) {
  validate(cfg);
  m.reserve(blocks.size());
  v.reserve(blocks.size());
  for (const auto& b : blocks) {
    m.emplace_back(b.value.size(), 0.0);
    v.emplace_back(b.value.size(), 0.0);
  }
}

void adam_step(AdamState& state, std::span<const ParamBlock> blocks) {
  if (state.m.size() != blocks.size()) {
    throw ShapeError("adam_step: optimizer state has " + std::to_string(state.m.size()) +
                     " blocks, parameters have " + std::to_string(blocks.size()));
  }
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const auto& b = blocks[k];
    if (b.grad.size() != b.value.size() || state.m[k].size() != b.value.size()) {
      throw ShapeError("adam_step: size mismatch in block '" + b.name + "'");
    }
    for (double g : b.grad) {
      if (!std::isfinite(g)) throw NumericError("adam_step: non-finite gradient in block '" + b.name + "'");
    }
  }

  ++state.t;
  const auto& c = state.cfg;
  const double t = static_cast<double>(state.t);
  const double bc1 = 1.0 - std::pow(c.beta1, t);
  const double bc2 = 1.0 - std::pow(c.beta2, t);

  for (std::size_t k = 0; k < blocks.size(); ++k) {
    auto value = blocks[k].value;
    auto grad = blocks[k].grad;
    auto& m = state.m[k];
    auto& v = state.v[k];
    for (std::size_t i = 0; i < value.size(); ++i) {
      m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * grad[i];
      v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * grad[i] * grad[i];
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      value[i] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
    }
  }
}

}  // namespace dasdn::nn
