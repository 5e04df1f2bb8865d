#pragma once

#include <memory>
#include <vector>

#include "dasdn/config.hpp"
#include "dasdn/cpunet/denoise.hpp"
#include "dasdn/grid.hpp"
#include "dasdn/wavesim/model.hpp"

namespace dasdn::pipeline {

/// The model spec file when configured, otherwise the benchmark model.
wavesim::VelocityModel velocity_model(const RunConfig& cfg);

/// One clean gather (time x channels).
Grid2D synthesize(const RunConfig& cfg, Exec exec = Exec::parallel);

struct Corrupted {
  Grid2D noisy;
  Grid2D noise;  // the scaled noise actually added
  double scale = 0.0;
};

/// Composes the configured noise blend and mixes it in at cfg.target_snr.
/// `pool` supplies external noise records; empty uses the surrogate.
Corrupted corrupt(const Grid2D& clean, const RunConfig& cfg, const std::vector<Grid2D>& pool = {});

struct TrainedCpunet {
  std::unique_ptr<cpunet::CPUNet> net;
  cpunet::Standardizer stats;
  std::vector<double> loss_history;
};

/// Unsupervised training on noisy records: standardize, cut overlapping
/// patches, fit with the Huber loss.
TrainedCpunet train_cpunet(std::span<const Grid2D> noisy, const RunConfig& cfg,
                           const cpunet::EpochCallback& on_epoch = {});

Grid2D denoise(const cpunet::CPUNet& net, const cpunet::Standardizer& stats, const Grid2D& noisy,
               const RunConfig& cfg, Exec exec = Exec::parallel);

}  // namespace dasdn::pipeline
