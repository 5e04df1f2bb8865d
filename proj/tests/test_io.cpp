#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>

#include "dasdn/config.hpp"
#include "dasdn/io/binary.hpp"
#include "dasdn/io/dgrid.hpp"
#include "dasdn/io/keyvalue.hpp"
#include "dasdn/io/plot.hpp"
#include "support.hpp"

using namespace dasdn;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("dasdn_io_" + std::to_string(std::rand()) + "_" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path operator/(const std::string& name) const { return path / name; }
};

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

}  // namespace

TEST_CASE("dgrid round trip") {
  TempDir dir;
  Rng rng(1);
  const Grid2D g = testing::random_grid(rng, 37, 23);

  io::write_dgrid(dir / "a.dgrid", g, io::DType::f64);
  CHECK(io::read_dgrid(dir / "a.dgrid") == g);
  CHECK(io::dgrid_dtype(dir / "a.dgrid") == io::DType::f64);
  CHECK(fs::file_size(dir / "a.dgrid") == io::kDgridHeaderSize + 37 * 23 * 8);

  io::write_dgrid(dir / "b.dgrid", g, io::DType::f32);
  const Grid2D r = io::read_dgrid(dir / "b.dgrid");
  CHECK(fs::file_size(dir / "b.dgrid") == 14 + 37 * 23 * 4);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(r.values()[i] == static_cast<double>(static_cast<float>(g.values()[i])));
  // A float grid survives f32 storage exactly.
  io::write_dgrid(dir / "c.dgrid", r, io::DType::f32);
  CHECK(io::read_dgrid(dir / "c.dgrid") == r);

  // Header layout.
  const auto bytes = io::encode_dgrid(Grid2D(2, 3), io::DType::f32);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "DASG");
  CHECK(bytes[4] == 1);
  CHECK(bytes[5] == 2);
  CHECK(bytes[9] == 3);
  CHECK(bytes[13] == 0);
}

TEST_CASE("dgrid validation") {
  auto bytes = io::encode_dgrid(Grid2D(4, 4, 1.0), io::DType::f32);
  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_WITH_AS(io::decode_dgrid(bad), doctest::Contains("magic"), FormatError);
  bad = bytes;
  bad[4] = 7;
  CHECK_THROWS_WITH_AS(io::decode_dgrid(bad), doctest::Contains("version"), FormatError);
  bad = bytes;
  bad[13] = 5;
  CHECK_THROWS_WITH_AS(io::decode_dgrid(bad), doctest::Contains("dtype"), FormatError);
  bad = bytes;
  bad.pop_back();
  CHECK_THROWS_WITH_AS(io::decode_dgrid(bad), doctest::Contains("payload length mismatch"), FormatError);
  bad = bytes;
  bad.push_back(0);
  CHECK_THROWS_WITH_AS(io::decode_dgrid(bad), doctest::Contains("payload length mismatch"), FormatError);
  bad.assign(bytes.begin(), bytes.begin() + 6);
  CHECK_THROWS_AS(io::decode_dgrid(bad), FormatError);
}

TEST_CASE("csv") {
  TempDir dir;
  Rng rng(2);
  const Grid2D g = testing::random_grid(rng, 6, 4);
  io::write_grid(dir / "g.csv", g);
  CHECK(io::read_grid(dir / "g.csv") == g);
  write_text(dir / "ragged.csv", "1,2\n3\n");
  CHECK_THROWS_AS(io::read_csv(dir / "ragged.csv"), FormatError);
  write_text(dir / "word.csv", "1,x\n");
  CHECK_THROWS_AS(io::read_csv(dir / "word.csv"), FormatError);
  CHECK_THROWS_AS(io::read_grid(dir / "missing.dgrid"), UsageError);
}

TEST_CASE("heatmap rendering") {
  SUBCASE("constant grid is mid-gray") {
    const auto img = io::render_heatmap(Grid2D(5, 7, 3.0));
    CHECK(img.width == 7);
    CHECK(img.height == 5);
    for (auto p : img.pixels) CHECK(p == 128);
  }
  SUBCASE("outlier saturates, the rest spans the window") {
    Grid2D g(10, 10);
    for (std::size_t i = 0; i < g.size(); ++i) g.values()[i] = static_cast<double>(i % 50) / 49.0;
    g(3, 3) = 1e6;
    const double lo = io::percentile(g, 2.0), hi = io::percentile(g, 98.0);
    CHECK(hi < 2.0);
    const auto img = io::render_heatmap(g);
    CHECK(img.pixels[33] == 255);
    // Independent mapping of an interior sample.
    const double v = g(5, 7);
    const auto want = static_cast<int>(std::lround(255.0 * (std::clamp(v, lo, hi) - lo) / (hi - lo)));
    CHECK(std::abs(static_cast<int>(img.pixels[57]) - want) <= 1);
  }
  SUBCASE("percentile interpolation") {
    const Grid2D g(1, 5, std::vector<double>{4, 0, 1, 3, 2});
    CHECK(io::percentile(g, 0.0) == 0.0);
    CHECK(io::percentile(g, 50.0) == 2.0);
    CHECK(io::percentile(g, 100.0) == 4.0);
    CHECK(io::percentile(g, 12.5) == doctest::Approx(0.5));
  }
  SUBCASE("pgm file") {
    TempDir dir;
    io::plot_heatmap(Grid2D(3, 4, 1.0), dir / "x.pgm");
    std::ifstream in(dir / "x.pgm", std::ios::binary);
    std::string magic;
    int w = 0, h = 0, maxv = 0;
    in >> magic >> w >> h >> maxv;
    CHECK(magic == "P5");
    CHECK(w == 4);
    CHECK(h == 3);
    CHECK(maxv == 255);
    CHECK(fs::file_size(dir / "x.pgm") > 12);
  }
  SUBCASE("non-finite input is rejected before writing") {
    TempDir dir;
    Grid2D g(3, 3);
    g(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(io::plot_heatmap(g, dir / "nan.pgm"), NumericError);
    CHECK_FALSE(fs::exists(dir / "nan.pgm"));
  }
}

TEST_CASE("key-value sections") {
  const auto secs = io::parse_sections("# top\nseed = 4\n[a]\nx = 1 ; note\n\n[b]\ny=two\n[a]\nz = 3\n", "t");
  REQUIRE(secs.size() == 4);
  CHECK(secs[0].name.empty());
  CHECK(secs[1].name == "a");
  CHECK(secs[1].entries[0].value == "1");
  CHECK(secs[2].entries[0].value == "two");
  CHECK(secs[3].entries[0].line == 9);
  CHECK_THROWS_AS(io::parse_sections("[a\n", "t"), FormatError);
  CHECK_THROWS_AS(io::parse_sections("[a]\njust words\n", "t"), FormatError);
  CHECK_THROWS_AS(io::parse_double({"k", "1.5x", 1}, "t"), FormatError);
  CHECK(io::parse_int({"k", "-12", 1}, "t") == -12);
}

TEST_CASE("config precedence: default < file < environment < command line") {
  TempDir dir;
  write_text(dir / "run.ini", "[training]\nepochs = 40\nalpha = 1.3\n\n[run]\nseed = 7\n\n[noise]\ntarget_snr = 1.0\n");

  RunConfig def;
  CHECK(def.train.epochs == 100);
  CHECK(def.train.huber.alpha == 1.2);

  RunConfig cfg;
  cfg.load_file(dir / "run.ini");
  CHECK(cfg.train.epochs == 40);
  CHECK(cfg.train.huber.alpha == 1.3);
  CHECK(cfg.train.batch_size == def.train.batch_size);

  ::setenv("DASDN_SEED", "9", 1);
  cfg.apply_environment();
  ::unsetenv("DASDN_SEED");
  CHECK(cfg.seed == 9);

  cfg.set_assignment("training.epochs=5");
  cfg.set_assignment("run.seed=11");
  CHECK(cfg.train.epochs == 5);
  CHECK(cfg.train.huber.alpha == 1.3);
  CHECK(cfg.seed == 11);
  CHECK(cfg.target_snr == 1.0);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config rejects unknown or invalid settings") {
  TempDir dir;
  RunConfig cfg;
  CHECK_THROWS_WITH_AS(cfg.set("training", "epoch", "3"), doctest::Contains("unknown key"), ConfigError);
  CHECK_THROWS_WITH_AS(cfg.set("trainer", "epochs", "3"), doctest::Contains("unknown section"), ConfigError);
  CHECK_THROWS_AS(cfg.set("training", "epochs", "three"), FormatError);
  CHECK_THROWS_AS(cfg.set_assignment("epochs=3"), UsageError);
  write_text(dir / "bad.ini", "[training]\nlearning_rate = 0.1\n");
  CHECK_THROWS_WITH_AS(cfg.load_file(dir / "bad.ini"), doctest::Contains("bad.ini:2"), ConfigError);

  RunConfig c2;
  c2.set("patching", "overlap", "48");
  CHECK_THROWS_AS(c2.validate(), ConfigError);
  RunConfig c3;
  c3.set("baselines", "median_channel", "4");
  CHECK_THROWS_AS(c3.validate(), ConfigError);
  RunConfig c4;
  c4.set("simulation", "f0", "90");
  CHECK_THROWS_AS(c4.validate(), ConfigError);
  RunConfig c5;
  c5.set("noise", "synthetic_fraction", "0.5");
  CHECK_THROWS_AS(c5.validate(), ConfigError);
}

TEST_CASE("config dump reloads to the same settings") {
  TempDir dir;
  RunConfig cfg = RunConfig::benchmark();
  cfg.set_assignment("simulation.t0=0.04");
  cfg.set_assignment("training.lr=0.0005");
  cfg.set_assignment("simulation.recording=particle-velocity");
  write_text(dir / "dump.ini", cfg.dump());
  RunConfig back;
  back.load_file(dir / "dump.ini");
  CHECK(back.dump() == cfg.dump());
  CHECK(back.patch.overlap == 24);
  CHECK(back.train_overlap == 36);
  CHECK(back.unit.dropout == 0.0);
  CHECK(*back.source.t0 == 0.04);
}

TEST_CASE("derived seeds are distinct and stable") {
  RunConfig a, b;
  b.seed = 1;
  CHECK(a.noise_seed() != a.erratic_seed());
  CHECK(a.model_seed() != a.shuffle_seed());
  CHECK(a.noise_seed() != b.noise_seed());
  RunConfig a2;
  CHECK(a2.model_seed() == a.model_seed());
}

TEST_CASE("atomic writes leave no temporaries") {
  TempDir dir;
  io::write_file_atomic(dir / "f.txt", std::string_view("hello"));
  io::write_file_atomic(dir / "f.txt", std::string_view("bye"));
  std::size_t n = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir.path)) ++n;
  CHECK(n == 1);
  const auto data = io::read_file(dir / "f.txt");
  CHECK(std::string(data.begin(), data.end()) == "bye");
}
