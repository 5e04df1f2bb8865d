#include "dasdn/cpunet/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dasdn/error.hpp"
#include "dasdn/random.hpp"

namespace dasdn::cpunet {

void validate(const TrainConfig& cfg) {
  if (cfg.batch_size == 0) throw ConfigError("batch size must be positive");
  nn::validate(cfg.huber);
  nn::validate(cfg.adam);
}

std::vector<double> train_unsupervised(PatchModel& model, const patching::PatchSet& patches,
                                       const TrainConfig& cfg, const EpochCallback& on_epoch) {
  validate(cfg);
  if (patches.count() == 0) throw UsageError("train_unsupervised: empty patch set");
  const auto dim = static_cast<Eigen::Index>(patches.patch_length());
  if (dim != model.input_dim()) {
    throw ShapeError("train_unsupervised: patch length " + std::to_string(dim) +
                     " does not match model input width " + std::to_string(model.input_dim()));
  }

  const std::size_t n = patches.count();
  const Eigen::Map<const Matrix> all(patches.data.data(), dim, static_cast<Eigen::Index>(n));
  auto params = model.parameters();
  nn::AdamState adam(cfg.adam, params);
  Rng rng(mix_seed(cfg.seed, 0x5348u));

  std::vector<std::size_t> order(n);
  std::vector<double> history;
  history.reserve(cfg.epochs);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[uniform_index(rng, i + 1)]);

    double loss_sum = 0.0;
    for (std::size_t start = 0, batch = 0; start < n; start += cfg.batch_size, ++batch) {
      const std::size_t m = std::min(cfg.batch_size, n - start);
      Matrix y(dim, static_cast<Eigen::Index>(m));
      for (std::size_t j = 0; j < m; ++j) y.col(static_cast<Eigen::Index>(j)) = all.col(static_cast<Eigen::Index>(order[start + j]));

      model.zero_grad();
      const Matrix x = model.forward(y, Mode::train);
      const double loss = nn::huber_loss(x, y, cfg.huber);
      if (!std::isfinite(loss)) {
        throw NumericError("training loss is not finite at epoch " + std::to_string(epoch + 1) + ", batch " +
                           std::to_string(batch + 1));
      }
      model.backward(nn::huber_grad(x, y, cfg.huber));
      nn::adam_step(adam, params);
      loss_sum += loss * static_cast<double>(m);
    }
    history.push_back(loss_sum / static_cast<double>(n));
    if (on_epoch) on_epoch(epoch + 1, history.back());
  }
  return history;
}

}  // namespace dasdn::cpunet
