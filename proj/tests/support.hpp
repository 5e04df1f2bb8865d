#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dasdn/grid.hpp"
#include "dasdn/nn/adam.hpp"
#include "dasdn/nn/layers.hpp"
#include "dasdn/random.hpp"

namespace dasdn::testing {

inline nn::Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
  nn::Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = scale * standard_normal(rng);
  }
  return m;
}

inline Grid2D random_grid(Rng& rng, std::size_t rows, std::size_t cols, double scale = 1.0) {
  Grid2D g(rows, cols);
  for (double& v : g.values()) v = scale * standard_normal(rng);
  return g;
}

/// ||a - b|| / max(||a||, ||b||), 0 when both vanish.
inline double relative_error(std::span<const double> a, std::span<const double> b) {
  double d = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double den = std::sqrt(std::max(na, nb));
  return den == 0.0 ? 0.0 : std::sqrt(d) / den;
}

/// Central differences of `f` with respect to every entry of `x`, step h.
/// `x` is restored afterwards.
inline std::vector<double> numeric_gradient(std::span<double> x, const std::function<double()>& f,
                                            double h = 1e-5) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = f();
    x[i] = keep - h;
    const double down = f();
    x[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

inline std::span<double> span_of(nn::Matrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
inline std::span<const double> span_of(const nn::Matrix& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

/// sum(w .* y), the scalar probe used by the gradient checks.
inline double probe(const nn::Matrix& y, const nn::Matrix& w) { return (y.array() * w.array()).sum(); }

/// Moves layer-norm gains and shifts off their 1/0 initial values so that no
/// activation sits exactly on the LeakyReLU kink.
inline void randomize_norms(const std::vector<nn::ParamBlock>& blocks, Rng& rng) {
  auto ends_with = [](const std::string& s, const std::string& t) {
    return s.size() >= t.size() && s.compare(s.size() - t.size(), t.size(), t) == 0;
  };
  for (const auto& b : blocks) {
    if (ends_with(b.name, ".gamma")) {
      for (double& v : b.value) v = 1.0 + 0.3 * standard_normal(rng);
    } else if (ends_with(b.name, ".beta")) {
      for (double& v : b.value) v = 0.5 * standard_normal(rng);
    }
  }
}

/// Worst relative error between analytic and central-difference gradients of
/// probe(fwd(x), w), over the input and every parameter block. `fwd` must be
/// deterministic (reseed any dropout inside it); `bwd` receives dL/dy = w and
/// returns dL/dx while accumulating parameter gradients into `blocks`.
inline double gradient_check(const std::function<nn::Matrix(const nn::Matrix&)>& fwd,
                             const std::function<nn::Matrix(const nn::Matrix&)>& bwd,
                             const std::function<void()>& zero_grad, const std::vector<nn::ParamBlock>& blocks,
                             nn::Matrix x, const nn::Matrix& w) {
  zero_grad();
  fwd(x);
  const nn::Matrix gx = bwd(w);
  double worst = 0.0;
  for (const auto& b : blocks) {
    const std::vector<double> analytic(b.grad.begin(), b.grad.end());
    const auto numeric = numeric_gradient(b.value, [&] { return probe(fwd(x), w); });
    worst = std::max(worst, relative_error(analytic, numeric));
  }
  const auto numeric = numeric_gradient(span_of(x), [&] { return probe(fwd(x), w); });
  return std::max(worst, relative_error(span_of(gx), numeric));
}

}  // namespace dasdn::testing
