#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "dasdn/cpunet/model.hpp"
#include "dasdn/nn/adam.hpp"
#include "dasdn/nn/loss.hpp"
#include "dasdn/patching.hpp"

namespace dasdn::cpunet {

struct TrainConfig {
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  nn::HuberConfig huber;
  nn::AdamConfig adam;
  std::uint64_t seed = 0;  // shuffling only; the model carries its own seeds
};

void validate(const TrainConfig& cfg);

using EpochCallback = std::function<void(std::size_t epoch, double mean_loss)>;

/// Label-free training: each epoch visits the patches in a seeded random
/// order, in batches, minimizing Huber(model(y), y) with Adam. The patches
/// are the (standardized) noisy data and nothing else.
///
/// Returns the per-epoch mean loss. Throws NumericError on a non-finite
/// loss (with epoch and batch index) and UsageError on an empty patch set.
std::vector<double> train_unsupervised(PatchModel& model, const patching::PatchSet& patches,
                                       const TrainConfig& cfg, const EpochCallback& on_epoch = {});

}  // namespace dasdn::cpunet
