#pragma once

// Dense-network primitives. Every op has a batched form working on
// Matrix values whose columns are samples, and the single-sample forms
// are thin wrappers over it. Backward functions are pure: they take the
// forward inputs and the upstream gradient and return every gradient.

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "dasdn/random.hpp"

namespace dasdn::nn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Mask = Eigen::Matrix<unsigned char, Eigen::Dynamic, Eigen::Dynamic>;

enum class Mode { train, eval };

// ---------------------------------------------------------------------------
// Dense

struct DenseLayer {
  Matrix weights;  // out_dim x in_dim
  Vector bias;     // out_dim

  DenseLayer() = default;
  DenseLayer(Eigen::Index in_dim, Eigen::Index out_dim)
      : weights(Matrix::Zero(out_dim, in_dim)), bias(Vector::Zero(out_dim)) {}

  Eigen::Index in_dim() const { return weights.cols(); }
  Eigen::Index out_dim() const { return weights.rows(); }
};

struct DenseGrads {
  Matrix weights;
  Vector bias;
  Matrix input;
};

Matrix dense_forward(const DenseLayer& layer, const Matrix& x);
Vector dense_forward(const DenseLayer& layer, const Vector& x);
DenseGrads dense_backward(const DenseLayer& layer, const Matrix& x, const Matrix& grad_out);

/// Glorot-uniform weights in +-sqrt(6 / (in + out)), zero bias.
void glorot_init(DenseLayer& layer, Rng& rng);

// ---------------------------------------------------------------------------
// Layer normalization over the feature axis (population variance)

struct LayerNormParams {
  Vector gamma;
  Vector beta;
  double eps = 1e-5;

  LayerNormParams() = default;
  explicit LayerNormParams(Eigen::Index dim, double eps = 1e-5)
      : gamma(Vector::Ones(dim)), beta(Vector::Zero(dim)), eps(eps) {}

  Eigen::Index dim() const { return gamma.size(); }
};

struct LayerNormGrads {
  Vector gamma;
  Vector beta;
  Matrix input;
};

Matrix layer_norm_forward(const LayerNormParams& p, const Matrix& x);
Vector layer_norm_forward(const LayerNormParams& p, const Vector& x);
LayerNormGrads layer_norm_backward(const LayerNormParams& p, const Matrix& x, const Matrix& grad_out);

// ---------------------------------------------------------------------------
// LeakyReLU

struct LeakyReluConfig {
  double lambda = 0.2;
};

Matrix leaky_relu(const Matrix& x, const LeakyReluConfig& cfg);
Vector leaky_relu(const Vector& x, const LeakyReluConfig& cfg);
Matrix leaky_relu_backward(const Matrix& x, const Matrix& grad_out, const LeakyReluConfig& cfg);

// ---------------------------------------------------------------------------
// Inverted dropout

struct DropoutConfig {
  double rate = 0.1;
  std::uint64_t seed = 0;
  Mode mode = Mode::train;
};

struct DropoutResult {
  Matrix output;
  Mask mask;  // 1 = kept
};

/// Draws one mask element per entry of `x` (column-major order) from `rng`.
/// Eval mode and rate 0 consume no random numbers.
DropoutResult dropout_forward(const Matrix& x, const DropoutConfig& cfg, Rng& rng);
/// Convenience form that seeds a fresh generator from cfg.seed.
std::pair<Vector, Mask> dropout_forward(const Vector& x, const DropoutConfig& cfg);
Matrix dropout_backward(const Mask& mask, double rate, const Matrix& grad_out);

void validate(const LeakyReluConfig& cfg);
void validate(const DropoutConfig& cfg);
void validate(const LayerNormParams& p);

}  // namespace dasdn::nn
