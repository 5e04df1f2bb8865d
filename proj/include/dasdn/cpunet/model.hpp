#pragma once

#include <vector>

#include "dasdn/nn/adam.hpp"
#include "dasdn/nn/layers.hpp"

namespace dasdn::cpunet {

using nn::Matrix;
using nn::Mode;

/// A network mapping flattened patches (one per column) to patches of the
/// same length. The trainer and the record denoiser only see this surface.
class PatchModel {
 public:
  virtual ~PatchModel() = default;

  virtual Eigen::Index input_dim() const = 0;

  /// Training-path forward; caches activations for backward().
  virtual Matrix forward(const Matrix& batch, Mode mode) = 0;
  /// Accumulates parameter gradients of a scalar loss given dL/d(output).
  virtual Matrix backward(const Matrix& grad_out) = 0;
  /// Eval-mode forward without touching any cache; safe to call concurrently.
  virtual Matrix predict(const Matrix& batch) const = 0;

  virtual std::vector<nn::ParamBlock> parameters() = 0;
  virtual void zero_grad() = 0;
  /// Restart every dropout mask sequence from its configured seed.
  virtual void reseed_dropout() = 0;
};

}  // namespace dasdn::cpunet
