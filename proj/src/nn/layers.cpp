#include "dasdn/nn/layers.hpp"

#include <cmath>
#include <string>

#include "dasdn/error.hpp"

namespace dasdn::nn {

namespace {

void require_rows(const Matrix& x, Eigen::Index expected, const char* op) {
  if (x.rows() != expected) {
    throw ShapeError(std::string(op) + ": input has " + std::to_string(x.rows()) +
                     " features, expected " + std::to_string(expected));
  }
}

}  // namespace

// --- Dense -----------------------------------------------------------------

Matrix dense_forward(const DenseLayer& layer, const Matrix& x) {
  require_rows(x, layer.in_dim(), "dense_forward");
  if (layer.bias.size() != layer.out_dim()) throw ShapeError("dense_forward: bias length mismatch");
  Matrix y = layer.weights * x;
  y.colwise() += layer.bias;
  return y;
}

Vector dense_forward(const DenseLayer& layer, const Vector& x) {
  return dense_forward(layer, Matrix(x)).col(0);
}

DenseGrads dense_backward(const DenseLayer& layer, const Matrix& x, const Matrix& grad_out) {
  require_rows(x, layer.in_dim(), "dense_backward");
  require_rows(grad_out, layer.out_dim(), "dense_backward");
  if (x.cols() != grad_out.cols()) throw ShapeError("dense_backward: batch size mismatch");
  DenseGrads g;
  g.weights.noalias() = grad_out * x.transpose();
  g.bias = grad_out.rowwise().sum();
  g.input.noalias() = layer.weights.transpose() * grad_out;
  return g;
}

void glorot_init(DenseLayer& layer, Rng& rng) {
  const double limit =
      std::sqrt(6.0 / static_cast<double>(layer.in_dim() + layer.out_dim()));
  // Column-major fill order, fixed so checkpoints are reproducible.
  for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) {
    for (Eigen::Index i = 0; i < layer.weights.rows(); ++i) {
      layer.weights(i, j) = uniform(rng, -limit, limit);
    }
  }
  layer.bias.setZero();
}

// --- Layer norm ------------------------------------------------------------

namespace {

struct NormStats {
  Matrix xhat;             // normalized input, same shape as x
  Eigen::RowVectorXd inv_std;
};

NormStats normalize(const Matrix& x, double eps) {
  const double n = static_cast<double>(x.rows());
  const Eigen::RowVectorXd mean = x.colwise().sum() / n;
  NormStats s;
  s.xhat = x.rowwise() - mean;
  const Eigen::RowVectorXd var = s.xhat.colwise().squaredNorm() / n;
  s.inv_std = (var.array() + eps).rsqrt();
  s.xhat = s.xhat.array().rowwise() * s.inv_std.array();
  return s;
}

}  // namespace

Matrix layer_norm_forward(const LayerNormParams& p, const Matrix& x) {
  require_rows(x, p.dim(), "layer_norm_forward");
  NormStats s = normalize(x, p.eps);
  Matrix y = s.xhat.array().colwise() * p.gamma.array();
  y.colwise() += p.beta;
  return y;
}

Vector layer_norm_forward(const LayerNormParams& p, const Vector& x) {
  return layer_norm_forward(p, Matrix(x)).col(0);
}

LayerNormGrads layer_norm_backward(const LayerNormParams& p, const Matrix& x, const Matrix& grad_out) {
  require_rows(x, p.dim(), "layer_norm_backward");
  require_rows(grad_out, p.dim(), "layer_norm_backward");
  if (x.cols() != grad_out.cols()) throw ShapeError("layer_norm_backward: batch size mismatch");

  const double n = static_cast<double>(x.rows());
  NormStats s = normalize(x, p.eps);

  LayerNormGrads g;
  g.gamma = (grad_out.array() * s.xhat.array()).rowwise().sum();
  g.beta = grad_out.rowwise().sum();

  // dx = inv_std * (dxhat - mean(dxhat) - xhat * mean(dxhat * xhat)), per column
  const Matrix dxhat = grad_out.array().colwise() * p.gamma.array();
  const Eigen::RowVectorXd mean_d = dxhat.colwise().sum() / n;
  const Eigen::RowVectorXd mean_dx = (dxhat.array() * s.xhat.array()).colwise().sum() / n;
  g.input = dxhat;
  g.input.rowwise() -= mean_d;
  g.input -= (s.xhat.array().rowwise() * mean_dx.array()).matrix();
  g.input = g.input.array().rowwise() * s.inv_std.array();
  return g;
}

// --- LeakyReLU -------------------------------------------------------------

Matrix leaky_relu(const Matrix& x, const LeakyReluConfig& cfg) {
  return x.array().max(cfg.lambda * x.array());
}

Vector leaky_relu(const Vector& x, const LeakyReluConfig& cfg) {
  return x.array().max(cfg.lambda * x.array());
}

Matrix leaky_relu_backward(const Matrix& x, const Matrix& grad_out, const LeakyReluConfig& cfg) {
  if (x.rows() != grad_out.rows() || x.cols() != grad_out.cols()) {
    throw ShapeError("leaky_relu_backward: shape mismatch");
  }
  return (x.array() > 0.0).select(grad_out, cfg.lambda * grad_out);
}

// --- Dropout ---------------------------------------------------------------

DropoutResult dropout_forward(const Matrix& x, const DropoutConfig& cfg, Rng& rng) {
  DropoutResult r;
  r.mask = Mask::Ones(x.rows(), x.cols());
  if (cfg.mode == Mode::eval || cfg.rate == 0.0) {
    r.output = x;
    return r;
  }
  const double scale = 1.0 / (1.0 - cfg.rate);
  r.output.resize(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const bool keep = uniform01(rng) >= cfg.rate;
      r.mask(i, j) = keep ? 1 : 0;
      r.output(i, j) = keep ? x(i, j) * scale : 0.0;
    }
  }
  return r;
}

std::pair<Vector, Mask> dropout_forward(const Vector& x, const DropoutConfig& cfg) {
  Rng rng(cfg.seed);
  DropoutResult r = dropout_forward(Matrix(x), cfg, rng);
  return {r.output.col(0), std::move(r.mask)};
}

Matrix dropout_backward(const Mask& mask, double rate, const Matrix& grad_out) {
  if (mask.rows() != grad_out.rows() || mask.cols() != grad_out.cols()) {
    throw ShapeError("dropout_backward: mask shape mismatch");
  }
  const double scale = 1.0 / (1.0 - rate);
  return (mask.array() != 0).select(grad_out * scale, Matrix::Zero(grad_out.rows(), grad_out.cols()));
}

// --- Validation ------------------------------------------------------------

void validate(const LeakyReluConfig& cfg) {
  if (!(cfg.lambda >= 0.0 && cfg.lambda < 1.0)) {
    throw ConfigError("leaky ReLU slope must lie in [0, 1)");
  }
}

void validate(const DropoutConfig& cfg) {
  if (!(cfg.rate >= 0.0 && cfg.rate < 1.0)) throw ConfigError("dropout rate must lie in [0, 1)");
}

void validate(const LayerNormParams& p) {
  if (!(p.eps > 0.0)) throw ConfigError("layer norm eps must be positive");
  if (p.beta.size() != p.gamma.size()) throw ShapeError("layer norm gamma/beta length mismatch");
}

}  // namespace dasdn::nn
