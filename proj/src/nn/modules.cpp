#include "dasdn/nn/modules.hpp"

#include "dasdn/error.hpp"

namespace dasdn::nn {

namespace {

std::span<double> view(Matrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
std::span<double> view(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

void require_cache(bool cached, const char* who) {
  if (!cached) throw UsageError(std::string(who) + ": backward called without a cached forward pass");
}

}  // namespace

// --- Dense -----------------------------------------------------------------

Dense::Dense(Eigen::Index in_dim, Eigen::Index out_dim)
    : params_(in_dim, out_dim), grads_(in_dim, out_dim) {}

Matrix Dense::forward(const Matrix& x) {
  Matrix y = dense_forward(params_, x);
  input_ = x;
  cached_ = true;
  return y;
}

Matrix Dense::backward(const Matrix& grad_out) {
  require_cache(cached_, "Dense");
  DenseGrads g = dense_backward(params_, input_, grad_out);
  grads_.weights += g.weights;
  grads_.bias += g.bias;
  return std::move(g.input);
}

void Dense::zero_grad() {
  grads_.weights.setZero();
  grads_.bias.setZero();
}

void Dense::collect(const std::string& prefix, std::vector<ParamBlock>& out) {
  out.push_back({prefix + ".weight", view(params_.weights), view(grads_.weights)});
  out.push_back({prefix + ".bias", view(params_.bias), view(grads_.bias)});
}

// --- LayerNorm -------------------------------------------------------------

LayerNorm::LayerNorm(Eigen::Index dim, double eps)
    : params_(dim, eps), grad_gamma_(Vector::Zero(dim)), grad_beta_(Vector::Zero(dim)) {
  validate(params_);
}

Matrix LayerNorm::forward(const Matrix& x) {
  Matrix y = layer_norm_forward(params_, x);
  input_ = x;
  cached_ = true;
  return y;
}

Matrix LayerNorm::backward(const Matrix& grad_out) {
  require_cache(cached_, "LayerNorm");
  LayerNormGrads g = layer_norm_backward(params_, input_, grad_out);
  grad_gamma_ += g.gamma;
  grad_beta_ += g.beta;
  return std::move(g.input);
}

void LayerNorm::zero_grad() {
  grad_gamma_.setZero();
  grad_beta_.setZero();
}

void LayerNorm::collect(const std::string& prefix, std::vector<ParamBlock>& out) {
  out.push_back({prefix + ".gamma", view(params_.gamma), view(grad_gamma_)});
  out.push_back({prefix + ".beta", view(params_.beta), view(grad_beta_)});
}

// --- LeakyRelu -------------------------------------------------------------

Matrix LeakyRelu::forward(const Matrix& x) {
  input_ = x;
  cached_ = true;
  return leaky_relu(x, cfg_);
}

Matrix LeakyRelu::backward(const Matrix& grad_out) {
  require_cache(cached_, "LeakyRelu");
  return leaky_relu_backward(input_, grad_out, cfg_);
}

// --- Dropout ---------------------------------------------------------------

Dropout::Dropout(DropoutConfig cfg) : cfg_(cfg), rng_(cfg.seed) { validate(cfg_); }

Matrix Dropout::forward(const Matrix& x, Mode mode) {
  DropoutConfig c = cfg_;
  c.mode = mode;
  DropoutResult r = dropout_forward(x, c, rng_);
  mask_ = std::move(r.mask);
  cached_ = true;
  return std::move(r.output);
}

Matrix Dropout::backward(const Matrix& grad_out) {
  require_cache(cached_, "Dropout");
  return dropout_backward(mask_, cfg_.rate, grad_out);
}

// --- DenseUnit -------------------------------------------------------------

DenseUnit::DenseUnit(Eigen::Index in_dim, Eigen::Index out_dim, const UnitConfig& cfg,
                     std::uint64_t dropout_seed)
    : dense_(in_dim, out_dim),
      norm_(out_dim, cfg.ln_eps),
      act_(LeakyReluConfig{cfg.lambda}),
      dropout_(DropoutConfig{cfg.dropout, dropout_seed, Mode::train}) {
  validate(LeakyReluConfig{cfg.lambda});
}

Matrix DenseUnit::forward(const Matrix& x, Mode mode) {
  return dropout_.forward(act_.forward(norm_.forward(dense_.forward(x))), mode);
}

Matrix DenseUnit::predict(const Matrix& x) const {
  return leaky_relu(layer_norm_forward(norm_.params(), dense_forward(dense_.params(), x)), act_.config());
}

Matrix DenseUnit::backward(const Matrix& grad_out) {
  return dense_.backward(norm_.backward(act_.backward(dropout_.backward(grad_out))));
}

void DenseUnit::zero_grad() {
  dense_.zero_grad();
  norm_.zero_grad();
}

void DenseUnit::collect(const std::string& prefix, std::vector<ParamBlock>& out) {
  dense_.collect(prefix + ".dense", out);
  norm_.collect(prefix + ".norm", out);
}

}  // namespace dasdn::nn
