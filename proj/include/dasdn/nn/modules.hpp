#pragma once

// Stateful wrappers around the pure ops in layers.hpp. Each module owns its
// parameters and gradient accumulators and caches what its backward pass
// needs from the most recent forward call.

#include <string>
#include <vector>

#include "dasdn/nn/adam.hpp"
#include "dasdn/nn/layers.hpp"

namespace dasdn::nn {

class Dense {
 public:
  Dense() = default;
  Dense(Eigen::Index in_dim, Eigen::Index out_dim);

  Matrix forward(const Matrix& x);
  /// Accumulates parameter grads, returns the gradient w.r.t. the input.
  Matrix backward(const Matrix& grad_out);

  void init(Rng& rng) { glorot_init(params_, rng); }
  void zero_grad();
  void collect(const std::string& prefix, std::vector<ParamBlock>& out);

  const DenseLayer& params() const { return params_; }
  DenseLayer& params() { return params_; }
  const DenseLayer& grads() const { return grads_; }

 private:
  DenseLayer params_;
  DenseLayer grads_;
  Matrix input_;
  bool cached_ = false;
};

class LayerNorm {
 public:
  LayerNorm() = default;
  LayerNorm(Eigen::Index dim, double eps);

  Matrix forward(const Matrix& x);
  Matrix backward(const Matrix& grad_out);

  void zero_grad();
  void collect(const std::string& prefix, std::vector<ParamBlock>& out);

  const LayerNormParams& params() const { return params_; }
  LayerNormParams& params() { return params_; }

 private:
  LayerNormParams params_;
  Vector grad_gamma_;
  Vector grad_beta_;
  Matrix input_;
  bool cached_ = false;
};

class LeakyRelu {
 public:
  explicit LeakyRelu(LeakyReluConfig cfg = {}) : cfg_(cfg) {}

  Matrix forward(const Matrix& x);
  Matrix backward(const Matrix& grad_out);

  const LeakyReluConfig& config() const { return cfg_; }

 private:
  LeakyReluConfig cfg_;
  Matrix input_;
  bool cached_ = false;
};

class Dropout {
 public:
  Dropout() = default;
  explicit Dropout(DropoutConfig cfg);

  Matrix forward(const Matrix& x, Mode mode);
  Matrix backward(const Matrix& grad_out);

  double rate() const { return cfg_.rate; }
  /// Restart the mask sequence from the configured seed.
  void reseed() { rng_.seed(cfg_.seed); }

 private:
  DropoutConfig cfg_;
  Rng rng_;
  Mask mask_;
  bool cached_ = false;
};

struct UnitConfig {
  double lambda = 0.2;
  double dropout = 0.1;
  double ln_eps = 1e-5;
};

/// Dense -> LayerNorm -> LeakyReLU -> Dropout, the building block shared by
/// CPM branches, connection modules and the plain autoencoder stages.
class DenseUnit {
 public:
  DenseUnit() = default;
  DenseUnit(Eigen::Index in_dim, Eigen::Index out_dim, const UnitConfig& cfg, std::uint64_t dropout_seed);

  Matrix forward(const Matrix& x, Mode mode);
  Matrix backward(const Matrix& grad_out);
  /// Eval-mode forward from the parameters alone; leaves caches untouched.
  Matrix predict(const Matrix& x) const;

  void init(Rng& rng) { dense_.init(rng); }
  void zero_grad();
  void collect(const std::string& prefix, std::vector<ParamBlock>& out);
  void reseed() { dropout_.reseed(); }

  Eigen::Index in_dim() const { return dense_.params().in_dim(); }
  Eigen::Index out_dim() const { return dense_.params().out_dim(); }

  Dense& dense() { return dense_; }
  const Dense& dense() const { return dense_; }
  LayerNorm& norm() { return norm_; }
  const LayerNorm& norm() const { return norm_; }

 private:
  Dense dense_;
  LayerNorm norm_;
  LeakyRelu act_;
  Dropout dropout_;
};

}  // namespace dasdn::nn
