#include "dasdn/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dasdn/dsp/fft.hpp"

namespace dasdn::baselines {

// --- Band-pass -------------------------------------------------------------

void validate(const BandpassConfig& cfg) {
  if (!(cfg.fs > 0.0)) throw ConfigError("band-pass sampling rate must be positive");
  const double nyquist = cfg.fs / 2.0;
  if (!(cfg.f_lo >= 0.0 && cfg.f_lo < cfg.f_hi && cfg.f_hi < nyquist)) {
    throw ConfigError("band-pass requires 0 <= f_lo < f_hi < Nyquist (" + std::to_string(nyquist) + " Hz)");
  }
  if (cfg.taper < 0.0) throw ConfigError("band-pass taper width must be non-negative");
}

double bandpass_gain(const BandpassConfig& cfg, double f) {
  if (f >= cfg.f_lo && f <= cfg.f_hi) return 1.0;
  const double w = cfg.taper;
  if (w > 0.0 && f < cfg.f_lo && f > cfg.f_lo - w) {
    return 0.5 * (1.0 + std::cos(std::numbers::pi * (cfg.f_lo - f) / w));
  }
  if (w > 0.0 && f > cfg.f_hi && f < cfg.f_hi + w) {
    return 0.5 * (1.0 + std::cos(std::numbers::pi * (f - cfg.f_hi) / w));
  }
  return 0.0;
}

Grid2D bandpass(const Grid2D& data, const BandpassConfig& cfg, Exec exec) {
  validate(cfg);
  return dsp::filter_traces(data, cfg.fs, [&](double f) { return bandpass_gain(cfg, f); }, exec);
}

// --- Median ----------------------------------------------------------------

void validate(const MedianConfig& cfg) {
  if (cfg.time_len % 2 == 0 || cfg.channel_len % 2 == 0) {
    throw ConfigError("median window sides must be odd (got " + std::to_string(cfg.time_len) + "x" +
                      std::to_string(cfg.channel_len) + ")");
  }
}

namespace {

std::size_t reflect(std::ptrdiff_t i, std::size_t n) {
  if (i < 0) return static_cast<std::size_t>(-i);
  const auto last = static_cast<std::ptrdiff_t>(n) - 1;
  if (i > last) return static_cast<std::size_t>(2 * last - i);
  return static_cast<std::size_t>(i);
}

void median_row(const Grid2D& data, const MedianConfig& cfg, std::size_t t, Grid2D& out, std::vector<double>& buf) {
  const auto ht = static_cast<std::ptrdiff_t>(cfg.time_len / 2);
  const auto hc = static_cast<std::ptrdiff_t>(cfg.channel_len / 2);
  const auto ti = static_cast<std::ptrdiff_t>(t);
  for (std::size_t c = 0; c < data.cols(); ++c) {
    const auto ci = static_cast<std::ptrdiff_t>(c);
    buf.clear();
    for (std::ptrdiff_t dt = -ht; dt <= ht; ++dt) {
      const std::size_t r = reflect(ti + dt, data.rows());
      for (std::ptrdiff_t dc = -hc; dc <= hc; ++dc) buf.push_back(data(r, reflect(ci + dc, data.cols())));
    }
    auto mid = buf.begin() + static_cast<std::ptrdiff_t>(buf.size() / 2);
    std::nth_element(buf.begin(), mid, buf.end());
    out(t, c) = *mid;
  }
}

}  // namespace

Grid2D median_filter(const Grid2D& data, const MedianConfig& cfg, Exec exec) {
  validate(cfg);
  if (data.empty()) return data;
  if (cfg.time_len / 2 >= data.rows() && cfg.time_len > 1) {
    throw ConfigError("median window is longer than the record's time axis");
  }
  if (cfg.channel_len / 2 >= data.cols() && cfg.channel_len > 1) {
    throw ConfigError("median window is wider than the record's channel axis");
  }
  Grid2D out(data.rows(), data.cols());
  const auto rows = static_cast<std::ptrdiff_t>(data.rows());
  if (exec == Exec::serial) {
    std::vector<double> buf;
    for (std::ptrdiff_t t = 0; t < rows; ++t) median_row(data, cfg, static_cast<std::size_t>(t), out, buf);
  } else {
#pragma omp parallel
    {
      std::vector<double> buf;
#pragma omp for schedule(static)
      for (std::ptrdiff_t t = 0; t < rows; ++t) median_row(data, cfg, static_cast<std::size_t>(t), out, buf);
    }
  }
  return out;
}

// --- Plain autoencoder -----------------------------------------------------

PlainAutoencoder::PlainAutoencoder(const AutoencoderConfig& cfg) : cfg_(cfg) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (cfg_.encoder_dims[i] != cfg_.decoder_dims[3 - i]) {
      throw ConfigError("autoencoder decoder widths must mirror the encoder widths");
    }
  }
  std::vector<Eigen::Index> widths{cfg_.input_dim};
  widths.insert(widths.end(), cfg_.encoder_dims.begin(), cfg_.encoder_dims.end());
  widths.insert(widths.end(), cfg_.decoder_dims.begin(), cfg_.decoder_dims.end());
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    stages_.emplace_back(widths[i], widths[i + 1], cfg_.unit, mix_seed(cfg_.seed, 1000 + i));
  }
  head_ = nn::Dense(widths.back(), cfg_.input_dim);

  Rng rng(mix_seed(cfg_.seed, 0));
  for (auto& s : stages_) s.init(rng);
  head_.init(rng);
}

nn::Matrix PlainAutoencoder::forward(const nn::Matrix& batch, nn::Mode mode) {
  if (batch.rows() != cfg_.input_dim) throw ShapeError("PlainAutoencoder::forward: patch length mismatch");
  nn::Matrix h = batch;
  for (auto& s : stages_) h = s.forward(h, mode);
  return head_.forward(h);
}

nn::Matrix PlainAutoencoder::backward(const nn::Matrix& grad_out) {
  nn::Matrix g = head_.backward(grad_out);
  for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) g = it->backward(g);
  return g;
}

nn::Matrix PlainAutoencoder::predict(const nn::Matrix& batch) const {
  if (batch.rows() != cfg_.input_dim) throw ShapeError("PlainAutoencoder::predict: patch length mismatch");
  nn::Matrix h = batch;
  for (const auto& s : stages_) h = s.predict(h);
  return nn::dense_forward(head_.params(), h);
}

std::vector<nn::ParamBlock> PlainAutoencoder::parameters() {
  std::vector<nn::ParamBlock> out;
  for (std::size_t i = 0; i < stages_.size(); ++i) stages_[i].collect("stage" + std::to_string(i + 1), out);
  head_.collect("head", out);
  return out;
}

void PlainAutoencoder::zero_grad() {
  for (auto& s : stages_) s.zero_grad();
  head_.zero_grad();
}

void PlainAutoencoder::reseed_dropout() {
  for (auto& s : stages_) s.reseed();
}

AutoencoderRun plain_autoencoder_denoise(const Grid2D& data, const AutoencoderConfig& model,
                                         const cpunet::TrainConfig& train, const patching::PatchConfig& patch,
                                         const patching::PatchConfig& train_patch) {
  AutoencoderConfig cfg = model;
  cfg.input_dim = static_cast<Eigen::Index>(patch.size * patch.size);
  PlainAutoencoder net(cfg);
  const auto stats = cpunet::Standardizer::fit(data);
  const auto patches = cpunet::training_patches(std::span<const Grid2D>(&data, 1), train_patch, stats);
  AutoencoderRun run;
  run.loss_history = cpunet::train_unsupervised(net, patches, train);
  run.denoised = cpunet::denoise_record(net, data, patch, stats);
  return run;
}

}  // namespace dasdn::baselines
