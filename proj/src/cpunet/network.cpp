#include "dasdn/cpunet/network.hpp"

#include <cmath>
#include <string>

#include "dasdn/error.hpp"

namespace dasdn::cpunet {

namespace {

// Stream ids for seed derivation; dropout streams are offset by unit index.
constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kDropoutStream = 1000;

Matrix vstack(const Matrix& top, const Matrix& bottom) {
  Matrix out(top.rows() + bottom.rows(), top.cols());
  out.topRows(top.rows()) = top;
  out.bottomRows(bottom.rows()) = bottom;
  return out;
}

}  // namespace

std::array<Eigen::Index, 3> branch_dims(Eigen::Index out_dim, const BranchFractions& f) {
  for (double x : f) {
    if (!(x > 0.0)) throw ConfigError("CPM branch fractions must be positive");
  }
  if (std::abs(f[0] + f[1] + f[2] - 1.0) > 1e-9) throw ConfigError("CPM branch fractions must sum to 1");
  const auto d = static_cast<double>(out_dim);
  const auto w2 = static_cast<Eigen::Index>(std::lround(f[1] * d));
  const auto w3 = static_cast<Eigen::Index>(std::lround(f[2] * d));
  const Eigen::Index w1 = out_dim - w2 - w3;
  if (w1 < 1 || w2 < 1 || w3 < 1) {
    throw ConfigError("CPM output width " + std::to_string(out_dim) +
                      " cannot be split into three positive branches");
  }
  return {w1, w2, w3};
}

// --- CPM -------------------------------------------------------------------

CPMLayer::CPMLayer(const CPMConfig& cfg, std::uint64_t seed) : out_dim_(cfg.out_dim) {
  if (cfg.in_dim < 1) throw ConfigError("CPM input width must be positive");
  const auto w = branch_dims(cfg.out_dim, cfg.fractions);
  for (std::size_t b = 0; b < 3; ++b) {
    branches_[b] = nn::DenseUnit(cfg.in_dim, w[b], cfg.unit, mix_seed(seed, b));
  }
}

std::array<Eigen::Index, 3> CPMLayer::widths() const {
  return {branches_[0].out_dim(), branches_[1].out_dim(), branches_[2].out_dim()};
}

Matrix CPMLayer::forward(const Matrix& x, Mode mode) {
  Matrix out(out_dim_, x.cols());
  Eigen::Index row = 0;
  for (auto& b : branches_) {
    out.middleRows(row, b.out_dim()) = b.forward(x, mode);
    row += b.out_dim();
  }
  return out;
}

Matrix CPMLayer::backward(const Matrix& grad_out) {
  if (grad_out.rows() != out_dim_) throw ShapeError("CPMLayer::backward: gradient width mismatch");
  Matrix grad_in;
  Eigen::Index row = 0;
  for (auto& b : branches_) {
    Matrix g = b.backward(grad_out.middleRows(row, b.out_dim()));
    row += b.out_dim();
    if (grad_in.size() == 0) {
      grad_in = std::move(g);
    } else {
      grad_in += g;
    }
  }
  return grad_in;
}

Matrix CPMLayer::predict(const Matrix& x) const {
  Matrix out(out_dim_, x.cols());
  Eigen::Index row = 0;
  for (const auto& b : branches_) {
    out.middleRows(row, b.out_dim()) = b.predict(x);
    row += b.out_dim();
  }
  return out;
}

void CPMLayer::init(Rng& rng) {
  for (auto& b : branches_) b.init(rng);
}

void CPMLayer::zero_grad() {
  for (auto& b : branches_) b.zero_grad();
}

void CPMLayer::reseed() {
  for (auto& b : branches_) b.reseed();
}

void CPMLayer::collect(const std::string& prefix, std::vector<nn::ParamBlock>& out) {
  for (std::size_t b = 0; b < 3; ++b) branches_[b].collect(prefix + ".branch" + std::to_string(b), out);
}

nn::Vector cpm_forward(const CPMLayer& cpm, const nn::Vector& x) {
  if (x.size() != cpm.in_dim()) throw ShapeError("cpm_forward: input width mismatch");
  return cpm.predict(Matrix(x)).col(0);
}

// --- CM --------------------------------------------------------------------

CMLayer::CMLayer(Eigen::Index dim, const nn::UnitConfig& unit, std::uint64_t seed)
    : unit_(dim, dim, unit, seed) {}

nn::Vector cm_forward(const CMLayer& cm, const nn::Vector& x) {
  if (x.size() != cm.dim()) throw ShapeError("cm_forward: input width mismatch");
  return cm.predict(Matrix(x)).col(0);
}

// --- Config ----------------------------------------------------------------

CPUNetConfig CPUNetConfig::synthetic(Eigen::Index input_dim) {
  CPUNetConfig c;
  c.input_dim = input_dim;
  return c;
}

CPUNetConfig CPUNetConfig::field(Eigen::Index input_dim) {
  CPUNetConfig c;
  c.input_dim = input_dim;
  c.encoder_dims = {128, 64, 32, 16};
  c.decoder_dims = {16, 32, 64, 128};
  return c;
}

void validate(const CPUNetConfig& cfg) {
  if (cfg.input_dim < 1) throw ConfigError("CP-UNet input width must be positive");
  for (std::size_t i = 0; i < 4; ++i) {
    if (cfg.encoder_dims[i] != cfg.decoder_dims[3 - i]) {
      throw ConfigError("CP-UNet decoder stage " + std::to_string(4 - i) + " width " +
                        std::to_string(cfg.decoder_dims[3 - i]) + " does not mirror encoder stage " +
                        std::to_string(i + 1) + " width " + std::to_string(cfg.encoder_dims[i]));
    }
    try {
      branch_dims(cfg.encoder_dims[i], cfg.fractions);
    } catch (const ConfigError& e) {
      throw ConfigError("CP-UNet encoder stage " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  nn::validate(nn::LeakyReluConfig{cfg.unit.lambda});
  nn::validate(nn::DropoutConfig{cfg.unit.dropout, 0, Mode::train});
  if (!(cfg.unit.ln_eps > 0.0)) throw ConfigError("layer norm eps must be positive");
}

// --- CPUNet ----------------------------------------------------------------

CPUNet::CPUNet(const CPUNetConfig& cfg) : cfg_(cfg) {
  validate(cfg_);
  const auto& enc = cfg_.encoder_dims;
  const auto& dec = cfg_.decoder_dims;
  std::uint64_t unit = 0;
  auto next_seed = [&] { return mix_seed(cfg_.seed, kDropoutStream + unit++); };

  Eigen::Index in = cfg_.input_dim;
  for (std::size_t i = 0; i < 4; ++i) {
    encoder_[i] = CPMLayer({in, enc[i], cfg_.fractions, cfg_.unit}, next_seed());
    in = enc[i];
  }
  for (std::size_t i = 0; i < 3; ++i) connections_[i] = CMLayer(enc[i], cfg_.unit, next_seed());

  // Decoder stage k > 0 consumes [previous output; CM of encoder stage 3 - k].
  decoder_[0] = CPMLayer({enc[3], dec[0], cfg_.fractions, cfg_.unit}, next_seed());
  for (std::size_t k = 1; k < 4; ++k) {
    const Eigen::Index feed = dec[k - 1] + connections_[3 - k].dim();
    decoder_[k] = CPMLayer({feed, dec[k], cfg_.fractions, cfg_.unit}, next_seed());
  }
  head_ = nn::Dense(dec[3], cfg_.input_dim);

  Rng rng(mix_seed(cfg_.seed, kInitStream));
  for (auto& e : encoder_) e.init(rng);
  for (auto& c : connections_) c.init(rng);
  for (auto& d : decoder_) d.init(rng);
  head_.init(rng);
}

Matrix CPUNet::forward(const Matrix& batch, Mode mode) {
  if (batch.rows() != cfg_.input_dim) throw ShapeError("CPUNet::forward: patch length mismatch");
  std::array<Matrix, 4> e;
  e[0] = encoder_[0].forward(batch, mode);
  for (std::size_t i = 1; i < 4; ++i) e[i] = encoder_[i].forward(e[i - 1], mode);

  Matrix d = decoder_[0].forward(e[3], mode);
  for (std::size_t k = 1; k < 4; ++k) {
    const Matrix skip = connections_[3 - k].forward(e[3 - k], mode);
    d = decoder_[k].forward(vstack(d, skip), mode);
  }
  cached_ = true;
  return head_.forward(d);
}

Matrix CPUNet::backward(const Matrix& grad_out) {
  if (!cached_) throw UsageError("CPUNet::backward called without a cached forward pass");
  std::array<Matrix, 4> grad_e;
  Matrix g = head_.backward(grad_out);
  for (std::size_t k = 3; k >= 1; --k) {
    const Matrix feed = decoder_[k].backward(g);
    const Eigen::Index prev = cfg_.decoder_dims[k - 1];
    grad_e[3 - k] = connections_[3 - k].backward(feed.bottomRows(feed.rows() - prev));
    g = feed.topRows(prev);
  }
  grad_e[3] = decoder_[0].backward(g);

  Matrix ge = encoder_[3].backward(grad_e[3]);
  for (std::size_t i = 3; i >= 1; --i) {
    ge += grad_e[i - 1];
    ge = encoder_[i - 1].backward(ge);
  }
  return ge;
}

Matrix CPUNet::predict(const Matrix& batch) const {
  if (batch.rows() != cfg_.input_dim) throw ShapeError("CPUNet::predict: patch length mismatch");
  std::array<Matrix, 4> e;
  e[0] = encoder_[0].predict(batch);
  for (std::size_t i = 1; i < 4; ++i) e[i] = encoder_[i].predict(e[i - 1]);
  Matrix d = decoder_[0].predict(e[3]);
  for (std::size_t k = 1; k < 4; ++k) d = decoder_[k].predict(vstack(d, connections_[3 - k].predict(e[3 - k])));
  return nn::dense_forward(head_.params(), d);
}

std::vector<nn::ParamBlock> CPUNet::parameters() {
  std::vector<nn::ParamBlock> out;
  for (std::size_t i = 0; i < 4; ++i) encoder_[i].collect("encoder" + std::to_string(i + 1), out);
  for (std::size_t i = 0; i < 3; ++i) connections_[i].collect("cm" + std::to_string(i + 1), out);
  for (std::size_t i = 0; i < 4; ++i) decoder_[i].collect("decoder" + std::to_string(i + 1), out);
  head_.collect("head", out);
  return out;
}

std::size_t CPUNet::parameter_count() {
  std::size_t n = 0;
  for (const auto& b : parameters()) n += b.value.size();
  return n;
}

void CPUNet::zero_grad() {
  for (auto& e : encoder_) e.zero_grad();
  for (auto& c : connections_) c.zero_grad();
  for (auto& d : decoder_) d.zero_grad();
  head_.zero_grad();
}

void CPUNet::reseed_dropout() {
  for (auto& e : encoder_) e.reseed();
  for (auto& c : connections_) c.reseed();
  for (auto& d : decoder_) d.reseed();
}

nn::Vector cpunet_forward(const CPUNet& net, const nn::Vector& patch) {
  return net.predict(Matrix(patch)).col(0);
}

}  // namespace dasdn::cpunet
