#include "dasdn/pipeline.hpp"

#include "dasdn/metrics.hpp"
#include "dasdn/noise.hpp"
#include "dasdn/wavesim/simulate.hpp"

namespace dasdn::pipeline {

wavesim::VelocityModel velocity_model(const RunConfig& cfg) {
  if (cfg.model_spec) return wavesim::build_layered_model(wavesim::load_model_spec(*cfg.model_spec));
  return wavesim::build_layered_model(wavesim::benchmark_model_spec(cfg.model_width, cfg.model_depth));
}

Grid2D synthesize(const RunConfig& cfg, Exec exec) {
  return wavesim::simulate_shot(velocity_model(cfg), cfg.source, cfg.sim, exec).data;
}

Corrupted corrupt(const Grid2D& clean, const RunConfig& cfg, const std::vector<Grid2D>& pool) {
  auto random = cfg.random;
  random.seed = cfg.noise_seed();
  random.fs = 1.0 / cfg.sim.dt_out;
  auto erratic = cfg.erratic;
  erratic.seed = cfg.erratic_seed();
  auto mix = cfg.mix();
  mix.external_pool = pool;

  const double clean_rms = metrics::rms(clean);
  if (!(clean_rms > 0.0)) throw UsageError("cannot corrupt an all-zero record");
  const Grid2D n = noise::compose_noise(clean.rows(), clean.cols(), mix, random, erratic, clean_rms);
  auto mixed = noise::mix_to_snr(clean, n, cfg.target_snr);
  Grid2D added = n;
  for (double& v : added.values()) v *= mixed.scale;
  return {std::move(mixed.noisy), std::move(added), mixed.scale};
}

TrainedCpunet train_cpunet(std::span<const Grid2D> noisy, const RunConfig& cfg,
                           const cpunet::EpochCallback& on_epoch) {
  TrainedCpunet out;
  out.net = std::make_unique<cpunet::CPUNet>(cfg.network());
  out.stats = cpunet::Standardizer::fit(noisy);
  const auto patches = cpunet::training_patches(noisy, cfg.training_patch(), out.stats);
  if (cfg.train.epochs > 0) out.loss_history = cpunet::train_unsupervised(*out.net, patches, cfg.training(), on_epoch);
  return out;
}

Grid2D denoise(const cpunet::CPUNet& net, const cpunet::Standardizer& stats, const Grid2D& noisy,
               const RunConfig& cfg, Exec exec) {
  return cpunet::denoise_record(net, noisy, cfg.patch, stats, exec);
}

}  // namespace dasdn::pipeline
