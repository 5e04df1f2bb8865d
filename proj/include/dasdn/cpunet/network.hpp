#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "dasdn/cpunet/model.hpp"
#include "dasdn/nn/modules.hpp"

namespace dasdn::cpunet {

using BranchFractions = std::array<double, 3>;

/// Split `out_dim` into three branch widths in proportion to `fractions`.
/// The second and third widths are rounded, the first takes the remainder;
/// throws ConfigError unless all three are positive.
std::array<Eigen::Index, 3> branch_dims(Eigen::Index out_dim, const BranchFractions& fractions);

struct CPMConfig {
  Eigen::Index in_dim = 0;
  Eigen::Index out_dim = 0;
  BranchFractions fractions{0.5, 0.25, 0.25};
  nn::UnitConfig unit;
};

/// Context pyramid module: three Dense/LN/LeakyReLU/Dropout branches of
/// different widths over the same input, concatenated in declared order.
class CPMLayer {
 public:
  CPMLayer() = default;
  CPMLayer(const CPMConfig& cfg, std::uint64_t seed);

  Matrix forward(const Matrix& x, Mode mode);
  Matrix backward(const Matrix& grad_out);
  Matrix predict(const Matrix& x) const;

  void init(Rng& rng);
  void zero_grad();
  void reseed();
  void collect(const std::string& prefix, std::vector<nn::ParamBlock>& out);

  Eigen::Index in_dim() const { return branches_[0].in_dim(); }
  Eigen::Index out_dim() const { return out_dim_; }
  std::array<Eigen::Index, 3> widths() const;
  const nn::DenseUnit& branch(std::size_t i) const { return branches_[i]; }
  nn::DenseUnit& branch(std::size_t i) { return branches_[i]; }

 private:
  std::array<nn::DenseUnit, 3> branches_;
  Eigen::Index out_dim_ = 0;
};

/// Connection module: one Dense/LN/LeakyReLU/Dropout unit with equal in/out width.
class CMLayer {
 public:
  CMLayer() = default;
  CMLayer(Eigen::Index dim, const nn::UnitConfig& unit, std::uint64_t seed);

  Matrix forward(const Matrix& x, Mode mode) { return unit_.forward(x, mode); }
  Matrix backward(const Matrix& grad_out) { return unit_.backward(grad_out); }
  Matrix predict(const Matrix& x) const { return unit_.predict(x); }

  void init(Rng& rng) { unit_.init(rng); }
  void zero_grad() { unit_.zero_grad(); }
  void reseed() { unit_.reseed(); }
  void collect(const std::string& prefix, std::vector<nn::ParamBlock>& out) { unit_.collect(prefix, out); }

  Eigen::Index dim() const { return unit_.out_dim(); }
  const nn::DenseUnit& unit() const { return unit_; }

 private:
  nn::DenseUnit unit_;
};

/// Single-sample forms of the two blocks (eval mode).
nn::Vector cpm_forward(const CPMLayer& cpm, const nn::Vector& x);
nn::Vector cm_forward(const CMLayer& cm, const nn::Vector& x);

struct CPUNetConfig {
  Eigen::Index input_dim = 48 * 48;
  std::array<Eigen::Index, 4> encoder_dims{64, 32, 16, 8};
  std::array<Eigen::Index, 4> decoder_dims{8, 16, 32, 64};
  BranchFractions fractions{0.5, 0.25, 0.25};
  nn::UnitConfig unit;
  std::uint64_t seed = 0;

  /// Stage widths used for the synthetic benchmark.
  static CPUNetConfig synthetic(Eigen::Index input_dim = 48 * 48);
  /// Wider stage widths used for field records.
  static CPUNetConfig field(Eigen::Index input_dim = 48 * 48);
};

/// Throws ConfigError naming the first stage whose dimensions do not close.
void validate(const CPUNetConfig& cfg);

/// Four CPM encoder stages, connection modules on encoder stages 1-3, four
/// CPM decoder stages and a linear output head.
///
///   e1 = E1(x)  e2 = E2(e1)  e3 = E3(e2)  e4 = E4(e3)
///   d1 = D1(e4)
///   d2 = D2([d1; CM3(e3)])  d3 = D3([d2; CM2(e2)])  d4 = D4([d3; CM1(e1)])
///   y  = head(d4)
class CPUNet final : public PatchModel {
 public:
  explicit CPUNet(const CPUNetConfig& cfg);

  Eigen::Index input_dim() const override { return cfg_.input_dim; }
  Matrix forward(const Matrix& batch, Mode mode) override;
  Matrix backward(const Matrix& grad_out) override;
  Matrix predict(const Matrix& batch) const override;
  std::vector<nn::ParamBlock> parameters() override;
  void zero_grad() override;
  void reseed_dropout() override;

  const CPUNetConfig& config() const { return cfg_; }
  std::size_t parameter_count();

  const CPMLayer& encoder(std::size_t i) const { return encoder_[i]; }
  const CPMLayer& decoder(std::size_t i) const { return decoder_[i]; }
  const CMLayer& connection(std::size_t i) const { return connections_[i]; }

 private:
  CPUNetConfig cfg_;
  std::array<CPMLayer, 4> encoder_;
  std::array<CMLayer, 3> connections_;
  std::array<CPMLayer, 4> decoder_;
  nn::Dense head_;
  bool cached_ = false;
};

/// Single-sample forward, eval mode.
nn::Vector cpunet_forward(const CPUNet& net, const nn::Vector& patch);

}  // namespace dasdn::cpunet
