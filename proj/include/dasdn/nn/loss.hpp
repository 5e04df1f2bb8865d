#pragma once

#include "dasdn/nn/layers.hpp"

namespace dasdn::nn {

struct HuberConfig {
  double alpha = 1.2;
};

void validate(const HuberConfig& cfg);

/// Mean over all entries of the Huber penalty of r = x - y:
/// r^2 / 2 for |r| < alpha, alpha |r| - alpha^2 / 2 otherwise.
double huber_loss(const Matrix& x, const Matrix& y, const HuberConfig& cfg);
double huber_loss(const Vector& x, const Vector& y, const HuberConfig& cfg);

/// d(huber_loss)/dx, including the 1/N of the mean.
Matrix huber_grad(const Matrix& x, const Matrix& y, const HuberConfig& cfg);
Vector huber_grad(const Vector& x, const Vector& y, const HuberConfig& cfg);

}  // namespace dasdn::nn
