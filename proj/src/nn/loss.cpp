#include "dasdn/nn/loss.hpp"

#include <cmath>

#include "dasdn/error.hpp"

namespace dasdn::nn {

void validate(const HuberConfig& cfg) {
  if (!(cfg.alpha > 0.0)) throw ConfigError("Huber alpha must be positive");
}

double huber_loss(const Matrix& x, const Matrix& y, const HuberConfig& cfg) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw ShapeError("huber_loss: shape mismatch");
  if (x.size() == 0) throw UsageError("huber_loss: empty input");
  const double a = cfg.alpha;
  const auto r = (x - y).array().abs();
  const double total = (r < a).select(0.5 * r.square(), a * r - 0.5 * a * a).sum();
  return total / static_cast<double>(x.size());
}

double huber_loss(const Vector& x, const Vector& y, const HuberConfig& cfg) {
  return huber_loss(Matrix(x), Matrix(y), cfg);
}

Matrix huber_grad(const Matrix& x, const Matrix& y, const HuberConfig& cfg) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw ShapeError("huber_grad: shape mismatch");
  const double inv_n = 1.0 / static_cast<double>(x.size());
  return (x - y).array().max(-cfg.alpha).min(cfg.alpha) * inv_n;
}

Vector huber_grad(const Vector& x, const Vector& y, const HuberConfig& cfg) {
  return huber_grad(Matrix(x), Matrix(y), cfg).col(0);
}

}  // namespace dasdn::nn
