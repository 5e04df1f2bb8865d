#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "dasdn/cpunet/checkpoint.hpp"
#include "dasdn/cpunet/denoise.hpp"
#include "dasdn/cpunet/network.hpp"
#include "dasdn/cpunet/trainer.hpp"
#include "dasdn/io/binary.hpp"
#include "support.hpp"

using namespace dasdn;
using namespace dasdn::cpunet;
using dasdn::testing::gradient_check;
using dasdn::testing::random_matrix;

namespace {

// Smallest widths that still split into three positive branches.
CPUNetConfig shrunken(std::uint64_t seed = 5, double dropout = 0.2) {
  CPUNetConfig c;
  c.input_dim = 16;
  // Quarter-width branches need d >= 6 to get two units; a one- or two-unit
  // layer norm is flat at eps = 1e-5, so the check runs with a softer eps.
  c.encoder_dims = {8, 8, 6, 6};
  c.decoder_dims = {6, 6, 8, 8};
  c.unit.dropout = dropout;
  c.unit.ln_eps = 0.1;
  c.seed = seed;
  return c;
}

nn::Vector unit_eval(const nn::DenseUnit& u, const nn::Vector& x) {
  return nn::leaky_relu(nn::layer_norm_forward(u.norm().params(), nn::dense_forward(u.dense().params(), x)), {0.2});
}

}  // namespace

TEST_CASE("branch widths") {
  CHECK(branch_dims(64, {0.5, 0.25, 0.25}) == std::array<Eigen::Index, 3>{32, 16, 16});
  CHECK(branch_dims(8, {0.5, 0.25, 0.25}) == std::array<Eigen::Index, 3>{4, 2, 2});
  CHECK(branch_dims(3, {0.5, 0.25, 0.25}) == std::array<Eigen::Index, 3>{1, 1, 1});
  CHECK_THROWS_AS(branch_dims(2, {0.5, 0.25, 0.25}), ConfigError);
  CHECK_THROWS_AS(branch_dims(64, {0.5, 0.25, 0.2}), ConfigError);
  for (Eigen::Index d = 3; d < 200; ++d) {
    const auto w = branch_dims(d, {0.5, 0.25, 0.25});
    CHECK(w[0] + w[1] + w[2] == d);
  }
}

TEST_CASE("cpm forward on zero input is the per-branch bias response") {
  CPMLayer cpm({10, 64, {0.5, 0.25, 0.25}, {}}, 3);
  Rng rng(1);
  cpm.init(rng);
  for (std::size_t b = 0; b < 3; ++b) {
    const_cast<nn::DenseUnit&>(cpm.branch(b)).dense().params().bias =
        random_matrix(rng, cpm.branch(b).out_dim(), 1);
  }
  const nn::Vector y = cpm_forward(cpm, nn::Vector::Zero(10));
  REQUIRE(y.size() == 64);
  CHECK(cpm.widths() == std::array<Eigen::Index, 3>{32, 16, 16});
  Eigen::Index row = 0;
  for (std::size_t b = 0; b < 3; ++b) {
    const auto& u = cpm.branch(b);
    const nn::Vector expect =
        nn::leaky_relu(nn::layer_norm_forward(u.norm().params(), nn::Vector(u.dense().params().bias)), {0.2});
    CHECK((y.segment(row, u.out_dim()) - expect).cwiseAbs().maxCoeff() == 0.0);
    row += u.out_dim();
  }
  CHECK(cpm_forward(cpm, nn::Vector::Zero(10)) == y);
}

TEST_CASE("cm forward in eval mode ignores dropout") {
  CMLayer cm(16, {0.2, 0.9, 1e-5}, 4);
  Rng rng(2);
  cm.init(rng);
  const nn::Vector x = random_matrix(rng, 16, 1).col(0);
  const nn::Vector y = cm_forward(cm, x);
  CHECK(y.size() == 16);
  CHECK((y - unit_eval(cm.unit(), x)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(cm_forward(cm, nn::Vector::Zero(15)), ShapeError);
}

TEST_CASE("cpm and cm gradients match central differences") {
  Rng rng(8);
  for (int trial = 0; trial < 4; ++trial) {
    const Eigen::Index in = 4 + trial, out = 5 + trial;
    CPMLayer cpm({in, out, {0.5, 0.25, 0.25}, {0.2, 0.2, 1e-5}}, 40 + trial);
    cpm.init(rng);
    std::vector<nn::ParamBlock> blocks;
    cpm.collect("cpm", blocks);
    testing::randomize_norms(blocks, rng);
    const double err = gradient_check(
        [&](const Matrix& v) {
          cpm.reseed();
          return cpm.forward(v, Mode::train);
        },
        [&](const Matrix& g) { return cpm.backward(g); }, [&] { cpm.zero_grad(); }, blocks,
        random_matrix(rng, in, 3), random_matrix(rng, out, 3));
    CHECK(err <= 1e-4);

    CMLayer cm(out, {0.2, 0.2, 1e-5}, 70 + trial);
    cm.init(rng);
    std::vector<nn::ParamBlock> cb;
    cm.collect("cm", cb);
    testing::randomize_norms(cb, rng);
    const double err2 = gradient_check(
        [&](const Matrix& v) {
          cm.reseed();
          return cm.forward(v, Mode::train);
        },
        [&](const Matrix& g) { return cm.backward(g); }, [&] { cm.zero_grad(); }, cb, random_matrix(rng, out, 3),
        random_matrix(rng, out, 3));
    CHECK(err2 <= 1e-4);
  }
}

TEST_CASE("shrunken CP-UNet gradient matches central differences") {
  CPUNet net(shrunken());
  Rng rng(21);
  testing::randomize_norms(net.parameters(), rng);
  const double err = gradient_check(
      [&](const Matrix& v) {
        net.reseed_dropout();
        return net.forward(v, Mode::train);
      },
      [&](const Matrix& g) { return net.backward(g); }, [&] { net.zero_grad(); }, net.parameters(),
      random_matrix(rng, 16, 4), random_matrix(rng, 16, 4));
  CHECK(err <= 1e-4);
}

TEST_CASE("architecture wiring") {
  SUBCASE("synthetic preset") {
    CPUNet net(CPUNetConfig::synthetic());
    const std::array<Eigen::Index, 4> enc{64, 32, 16, 8}, dec{8, 16, 32, 64};
    Eigen::Index feed = 2304;
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(net.encoder(i).in_dim() == feed);
      CHECK(net.encoder(i).out_dim() == enc[i]);
      feed = enc[i];
    }
    for (std::size_t i = 0; i < 3; ++i) CHECK(net.connection(i).dim() == enc[i]);
    CHECK(net.decoder(0).in_dim() == 8);
    for (std::size_t k = 1; k < 4; ++k) {
      CHECK(net.decoder(k).in_dim() == dec[k - 1] + enc[3 - k]);
      CHECK(net.decoder(k).out_dim() == dec[k]);
    }
  }
  SUBCASE("field preset") {
    CPUNet net(CPUNetConfig::field());
    CHECK(net.encoder(0).out_dim() == 128);
    CHECK(net.decoder(3).out_dim() == 128);
  }
  SUBCASE("mismatched decoder is rejected naming the stage") {
    auto c = CPUNetConfig::synthetic();
    c.decoder_dims = {8, 16, 30, 64};
    try {
      CPUNet bad(c);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("stage") != std::string::npos);
    }
  }
}

TEST_CASE("forward is finite, shaped and deterministic") {
  CPUNet a(CPUNetConfig::synthetic()), b(CPUNetConfig::synthetic());
  CHECK(a.parameter_count() == b.parameter_count());
  Rng rng(3);
  const nn::Vector x = random_matrix(rng, 2304, 1).col(0);
  const nn::Vector y = cpunet_forward(a, x);
  CHECK(y.size() == 2304);
  CHECK(y.allFinite());
  CHECK(cpunet_forward(a, x) == y);
  CHECK(cpunet_forward(b, x) == y);
  CHECK_THROWS_AS(cpunet_forward(a, nn::Vector::Zero(100)), ShapeError);
  CHECK_THROWS_AS(a.backward(Matrix::Zero(2304, 1)), UsageError);
}

TEST_CASE("training") {
  patching::PatchSet set;
  set.size = 4;
  set.source_rows = set.source_cols = 4;
  Rng rng(6);
  for (int k = 0; k < 24; ++k) {
    set.origins.push_back({0, 0});
    for (int i = 0; i < 16; ++i) set.data.push_back(standard_normal(rng));
  }

  SUBCASE("zero epochs leaves the model untouched") {
    CPUNet net(shrunken()), fresh(shrunken());
    TrainConfig cfg;
    cfg.epochs = 0;
    CHECK(train_unsupervised(net, set, cfg).empty());
    CHECK(encode_checkpoint(net, {}, {4, 0}) == encode_checkpoint(fresh, {}, {4, 0}));
  }
  SUBCASE("loss decreases and runs repeat exactly") {
    TrainConfig cfg;
    cfg.epochs = 30;
    cfg.batch_size = 8;
    CPUNet n1(shrunken()), n2(shrunken());
    const auto h1 = train_unsupervised(n1, set, cfg);
    const auto h2 = train_unsupervised(n2, set, cfg);
    REQUIRE(h1.size() == 30);
    CHECK(h1.back() < h1.front());
    CHECK(h1 == h2);
  }
  SUBCASE("empty set") {
    CPUNet net(shrunken());
    CHECK_THROWS_AS(train_unsupervised(net, patching::PatchSet{}, TrainConfig{}), UsageError);
  }
  SUBCASE("non-finite data aborts with the epoch and batch") {
    CPUNet net(shrunken());
    set.data[3] = std::nan("");
    try {
      train_unsupervised(net, set, TrainConfig{});
      FAIL("expected NumericError");
    } catch (const NumericError& e) {
      CHECK(std::string(e.what()).find("epoch") != std::string::npos);
    }
  }
}

TEST_CASE("overfitting one constant patch reproduces it") {
  auto c = shrunken(9, 0.0);
  CPUNet net(c);
  patching::PatchSet set;
  set.size = 4;
  set.origins.assign(8, {0, 0});
  set.data.assign(8 * 16, 0.8);
  TrainConfig cfg;
  cfg.epochs = 600;
  cfg.batch_size = 8;
  cfg.adam.lr = 3e-3;
  train_unsupervised(net, set, cfg);
  const nn::Vector y = cpunet_forward(net, nn::Vector::Constant(16, 0.8));
  CHECK((y.array() - 0.8).abs().maxCoeff() / 0.8 < 1e-2);
}

TEST_CASE("standardizer") {
  const Grid2D g(3, 4, std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
  const auto s = Standardizer::fit(g);
  CHECK(s.mean == doctest::Approx(6.5));
  CHECK(s.scale == doctest::Approx(std::sqrt(143.0 / 12.0)));
  const Grid2D z = s.apply(g);
  double sum = 0.0;
  for (double v : z.values()) sum += v;
  CHECK(std::abs(sum) < 1e-12);
  const Grid2D back = s.invert(z);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(back.values()[i] == doctest::Approx(g.values()[i]));
  CHECK(Standardizer::fit(Grid2D(2, 2, 3.0)).scale == 1.0);
}

TEST_CASE("denoise record") {
  CPUNet net(CPUNetConfig::synthetic(16 * 16));
  Rng rng(4);
  const Grid2D rec = testing::random_grid(rng, 40, 35);
  const auto stats = Standardizer::fit(rec);
  const Grid2D a = denoise_record(net, rec, {16, 4}, stats, Exec::serial);
  CHECK(a.same_shape(rec));
  CHECK(denoise_record(net, rec, {16, 4}, stats, Exec::parallel) == a);
  CHECK(denoise_record(net, rec, {16, 4}, stats, Exec::serial) == a);
  CHECK_THROWS_AS(denoise_record(net, Grid2D(10, 40), {16, 0}, stats), UsageError);
}

TEST_CASE("checkpoint round trip") {
  CPUNet net(shrunken(77));
  patching::PatchSet set;
  set.size = 4;
  set.origins.assign(8, {0, 0});
  Rng rng(1);
  for (int i = 0; i < 8 * 16; ++i) set.data.push_back(standard_normal(rng));
  TrainConfig cfg;
  cfg.epochs = 3;
  train_unsupervised(net, set, cfg);

  const Standardizer stats{0.25, 3.5};
  const auto bytes = encode_checkpoint(net, stats, {4, 1});
  auto ck = decode_checkpoint(bytes);
  CHECK(ck.stats.mean == 0.25);
  CHECK(ck.stats.scale == 3.5);
  CHECK(ck.patch.size == 4);
  CHECK(ck.patch.overlap == 1);
  CHECK(encode_checkpoint(*ck.net, stats, {4, 1}) == bytes);
  const nn::Vector x = random_matrix(rng, 16, 1).col(0);
  CHECK(cpunet_forward(*ck.net, x) == cpunet_forward(net, x));

  const auto path = std::filesystem::temp_directory_path() / "dasdn_test.ckpt";
  save_checkpoint(path, net, stats, {4, 1});
  CHECK(io::read_file(path) == bytes);
  std::filesystem::remove(path);

  SUBCASE("corruption is reported") {
    auto bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(decode_checkpoint(bad), FormatError);
    auto cut = bytes;
    cut.resize(cut.size() - 5);
    CHECK_THROWS_AS(decode_checkpoint(cut), FormatError);
    auto extra = bytes;
    extra.push_back(0);
    CHECK_THROWS_AS(decode_checkpoint(extra), FormatError);
  }
}
