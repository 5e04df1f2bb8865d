#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "dasdn/cpunet/denoise.hpp"
#include "dasdn/cpunet/model.hpp"
#include "dasdn/cpunet/trainer.hpp"
#include "dasdn/exec.hpp"
#include "dasdn/grid.hpp"
#include "dasdn/nn/modules.hpp"
#include "dasdn/patching.hpp"

namespace dasdn::baselines {

struct BandpassConfig {
  double f_lo = 10.0;    // Hz
  double f_hi = 120.0;   // Hz
  double taper = 10.0;   // raised-cosine width on each side, Hz
  double fs = 1000.0;    // Hz
};

void validate(const BandpassConfig& cfg);

/// Zero-phase frequency-domain band-pass of every trace (time runs down rows).
Grid2D bandpass(const Grid2D& data, const BandpassConfig& cfg, Exec exec = Exec::parallel);

/// The gain applied at frequency f.
double bandpass_gain(const BandpassConfig& cfg, double f);

struct MedianConfig {
  std::size_t time_len = 1;
  std::size_t channel_len = 5;
};

void validate(const MedianConfig& cfg);

/// Sliding-window median with reflect (mirror, edge not repeated) padding.
Grid2D median_filter(const Grid2D& data, const MedianConfig& cfg, Exec exec = Exec::parallel);

// ---------------------------------------------------------------------------
// Plain dense autoencoder: the CP-UNet stage widths without pyramid branches
// or connection modules. Trained and applied exactly like CP-UNet.

struct AutoencoderConfig {
  Eigen::Index input_dim = 48 * 48;
  std::array<Eigen::Index, 4> encoder_dims{64, 32, 16, 8};
  std::array<Eigen::Index, 4> decoder_dims{8, 16, 32, 64};
  nn::UnitConfig unit;
  std::uint64_t seed = 0;
};

class PlainAutoencoder final : public cpunet::PatchModel {
 public:
  explicit PlainAutoencoder(const AutoencoderConfig& cfg);

  Eigen::Index input_dim() const override { return cfg_.input_dim; }
  nn::Matrix forward(const nn::Matrix& batch, nn::Mode mode) override;
  nn::Matrix backward(const nn::Matrix& grad_out) override;
  nn::Matrix predict(const nn::Matrix& batch) const override;
  std::vector<nn::ParamBlock> parameters() override;
  void zero_grad() override;
  void reseed_dropout() override;

 private:
  AutoencoderConfig cfg_;
  std::vector<nn::DenseUnit> stages_;
  nn::Dense head_;
};

struct AutoencoderRun {
  Grid2D denoised;
  std::vector<double> loss_history;
};

/// Fit the plain autoencoder to the record itself (no labels) and denoise it.
AutoencoderRun plain_autoencoder_denoise(const Grid2D& data, const AutoencoderConfig& model,
                                         const cpunet::TrainConfig& train, const patching::PatchConfig& patch,
                                         const patching::PatchConfig& train_patch);

}  // namespace dasdn::baselines
