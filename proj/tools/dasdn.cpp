// dasdn: synthesize, corrupt, train, denoise and score DAS shot gathers.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dasdn/baselines.hpp"
#include "dasdn/config.hpp"
#include "dasdn/cpunet/checkpoint.hpp"
#include "dasdn/exec.hpp"
#include "dasdn/io/binary.hpp"
#include "dasdn/io/dgrid.hpp"
#include "dasdn/io/keyvalue.hpp"
#include "dasdn/io/plot.hpp"
#include "dasdn/metrics.hpp"
#include "dasdn/noise.hpp"
#include "dasdn/pipeline.hpp"

namespace {

using namespace dasdn;

struct Options {
  std::string config_file;
  std::vector<std::string> assignments;
  std::vector<std::pair<std::string, std::string>> flags;  // (section.key, value) in command-line order
  std::string dtype = "f32";
  bool quiet = false;

  std::string input, input2, output, checkpoint, history, method, noise_out, convention = "standard";
  std::string overlap;
};

// A flag that writes one config key.
void map_flag(CLI::App* app, Options& o, const std::string& name, const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(
      name, [&o, key](const std::string& v) { o.flags.emplace_back(key, v); }, help + " [" + key + "]");
}

RunConfig effective_config(const Options& o) {
  RunConfig cfg;
  if (!o.config_file.empty()) cfg.load_file(o.config_file);
  cfg.apply_environment();
  for (const auto& a : o.assignments) cfg.set_assignment(a, "--set");
  for (const auto& [key, value] : o.flags) cfg.set_assignment(key + "=" + value, "flag");
  cfg.validate();
  if (cfg.threads > 0) set_threads(cfg.threads);
  return cfg;
}

io::DType parse_dtype(const std::string& s) {
  if (s == "f32") return io::DType::f32;
  if (s == "f64") return io::DType::f64;
  throw UsageError("--dtype must be f32 or f64");
}

std::string format_db(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void write_history(const std::string& path, const std::vector<double>& h) {
  std::ostringstream s;
  s << "epoch,loss\n";
  s.precision(17);
  for (std::size_t i = 0; i < h.size(); ++i) s << i + 1 << ',' << h[i] << '\n';
  io::write_file_atomic(path, s.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DAS denoising toolkit: elastic forward modeling, noise synthesis, CP-UNet and baselines"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config_file, "Run configuration file ([section] key = value)")->check(CLI::ExistingFile);
  app.add_option("--set", o.assignments, "Override any config key: section.key=value (repeatable)");
  map_flag(&app, o, "--seed", "run.seed", "Global seed (also DASDN_SEED)");
  map_flag(&app, o, "--threads", "run.threads", "OpenMP threads, 0 = default (also DASDN_THREADS)");
  app.add_flag("-q,--quiet", o.quiet, "Suppress progress output");

  auto* synth = app.add_subcommand("synthesize", "Simulate a clean shot gather from a layered model");
  synth->add_option("-o,--output", o.output, "Output gather (.dgrid or .csv)")->required();
  synth->add_option("--dtype", o.dtype, "Sample type for .dgrid output: f32 or f64");
  map_flag(synth, o, "--model-spec", "model.spec", "Layered model file; benchmark model when omitted");
  map_flag(synth, o, "--f0", "simulation.f0", "Ricker dominant frequency, Hz");
  map_flag(synth, o, "--nt", "simulation.nt_out", "Output time samples");
  map_flag(synth, o, "--dt", "simulation.dt_out", "Output sampling interval, s");
  map_flag(synth, o, "--recording", "simulation.recording", "strain-rate or particle-velocity");
  map_flag(synth, o, "--source-x", "simulation.source_x", "Source column (negative = center)");
  map_flag(synth, o, "--source-z", "simulation.source_z", "Source depth, rows");

  auto* noise_cmd = app.add_subcommand("noise", "Corrupt a clean gather to a target S/N");
  noise_cmd->add_option("clean", o.input, "Clean gather")->required()->check(CLI::ExistingFile);
  noise_cmd->add_option("-o,--output", o.output, "Noisy gather")->required();
  noise_cmd->add_option("--noise-output", o.noise_out, "Also write the added noise");
  noise_cmd->add_option("--dtype", o.dtype, "Sample type for .dgrid output: f32 or f64");
  map_flag(noise_cmd, o, "--target-snr", "noise.target_snr", "Target S/N, dB");
  map_flag(noise_cmd, o, "--pool", "noise.pool", "Directory of external noise records (.dgrid)");
  map_flag(noise_cmd, o, "--lowpass", "noise.lowpass_hz", "Gaussian noise low-pass corner, Hz (0 = white)");

  auto* train = app.add_subcommand("train", "Train CP-UNet on noisy gathers (no clean data used)");
  train->add_option("noisy", o.input, "Noisy gather")->required()->check(CLI::ExistingFile);
  train->add_option("-o,--output", o.checkpoint, "Checkpoint file")->required();
  train->add_option("--history", o.history, "Loss-history CSV");
  map_flag(train, o, "--epochs", "training.epochs", "Training epochs");
  map_flag(train, o, "--alpha", "training.alpha", "Huber threshold");
  map_flag(train, o, "--batch-size", "training.batch_size", "Patches per batch");
  map_flag(train, o, "--lr", "training.lr", "Adam learning rate");
  map_flag(train, o, "--preset", "training.preset", "synthetic or field widths");
  map_flag(train, o, "--patch", "patching.size", "Patch side");
  map_flag(train, o, "--overlap", "patching.overlap", "Inference patch overlap stored with the model");
  map_flag(train, o, "--train-overlap", "patching.train_overlap", "Overlap used to cut training patches");

  auto* den = app.add_subcommand("denoise", "Apply a trained checkpoint to a noisy gather");
  den->add_option("checkpoint", o.checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);
  den->add_option("noisy", o.input, "Noisy gather")->required()->check(CLI::ExistingFile);
  den->add_option("-o,--output", o.output, "Denoised gather")->required();
  den->add_option("--overlap", o.overlap, "Patch overlap (default: the one stored in the checkpoint)");
  den->add_option("--dtype", o.dtype, "Sample type for .dgrid output: f32 or f64");

  auto* base = app.add_subcommand("baseline", "Run a comparison method");
  base->add_option("method", o.method, "bandpass, median or autoencoder")
      ->required()
      ->check(CLI::IsMember({"bandpass", "median", "autoencoder"}));
  base->add_option("noisy", o.input, "Noisy gather")->required()->check(CLI::ExistingFile);
  base->add_option("-o,--output", o.output, "Filtered gather")->required();
  base->add_option("--history", o.history, "Loss-history CSV (autoencoder)");
  base->add_option("--dtype", o.dtype, "Sample type for .dgrid output: f32 or f64");
  map_flag(base, o, "--f-lo", "baselines.f_lo", "Band-pass low corner, Hz");
  map_flag(base, o, "--f-hi", "baselines.f_hi", "Band-pass high corner, Hz");
  map_flag(base, o, "--taper", "baselines.taper", "Band-pass taper width, Hz");
  map_flag(base, o, "--median-time", "baselines.median_time", "Median window along time (odd)");
  map_flag(base, o, "--median-channel", "baselines.median_channel", "Median window across channels (odd)");
  map_flag(base, o, "--epochs", "training.epochs", "Autoencoder training epochs");

  auto* snr = app.add_subcommand("snr", "S/N of an estimate against the clean gather, dB");
  snr->add_option("clean", o.input, "Clean gather")->required()->check(CLI::ExistingFile);
  snr->add_option("estimate", o.input2, "Estimate")->required()->check(CLI::ExistingFile);
  snr->add_option("--convention", o.convention, "standard or squared-residual")
      ->check(CLI::IsMember({"standard", "squared-residual"}));

  auto* plot = app.add_subcommand("plot", "Render a gather as a grayscale PGM image");
  plot->add_option("input", o.input, "Gather")->required()->check(CLI::ExistingFile);
  plot->add_option("-o,--output", o.output, "Output .pgm")->required();

  auto* show = app.add_subcommand("show-config", "Print the effective configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\nRun with --help for usage.\n";
    return 2;
  }

  auto log = [&](const std::string& msg) {
    if (!o.quiet) std::cerr << msg << '\n';
  };

  try {
    const RunConfig cfg = effective_config(o);
    const io::DType dtype = parse_dtype(o.dtype);

    if (*synth) {
      io::write_grid(o.output, pipeline::synthesize(cfg), dtype);
    } else if (*noise_cmd) {
      const Grid2D clean = io::read_grid(o.input);
      std::vector<Grid2D> pool;
      if (cfg.noise_pool) pool = noise::load_noise_pool(*cfg.noise_pool);
      const auto c = pipeline::corrupt(clean, cfg, pool);
      io::write_grid(o.output, c.noisy, dtype);
      if (!o.noise_out.empty()) io::write_grid(o.noise_out, c.noise, dtype);
    } else if (*train) {
      const Grid2D noisy = io::read_grid(o.input);
      auto t = pipeline::train_cpunet(std::span<const Grid2D>(&noisy, 1), cfg, [&](std::size_t e, double loss) {
        log("epoch " + std::to_string(e + 1) + " loss " + std::to_string(loss));
      });
      cpunet::save_checkpoint(o.checkpoint, *t.net, t.stats, cfg.patch);
      if (!o.history.empty()) write_history(o.history, t.loss_history);
    } else if (*den) {
      auto ck = cpunet::load_checkpoint(o.checkpoint);
      if (!o.overlap.empty()) {
        io::KeyValue kv{"--overlap", o.overlap, 0};
        ck.patch.overlap = static_cast<std::size_t>(io::parse_int(kv, "flag"));
        patching::validate(ck.patch);
      }
      const Grid2D noisy = io::read_grid(o.input);
      io::write_grid(o.output, cpunet::denoise_record(*ck.net, noisy, ck.patch, ck.stats), dtype);
    } else if (*base) {
      const Grid2D noisy = io::read_grid(o.input);
      Grid2D out;
      if (o.method == "bandpass") {
        auto bp = cfg.bandpass;
        bp.fs = 1.0 / cfg.sim.dt_out;
        out = baselines::bandpass(noisy, bp);
      } else if (o.method == "median") {
        out = baselines::median_filter(noisy, cfg.median);
      } else {
        baselines::AutoencoderConfig ac;
        ac.unit = cfg.unit;
        ac.seed = cfg.model_seed();
        auto run = baselines::plain_autoencoder_denoise(noisy, ac, cfg.training(), cfg.patch, cfg.training_patch());
        if (!o.history.empty()) write_history(o.history, run.loss_history);
        out = std::move(run.denoised);
      }
      io::write_grid(o.output, out, dtype);
    } else if (*snr) {
      const auto conv =
          o.convention == "standard" ? metrics::SnrConvention::standard : metrics::SnrConvention::squared_residual;
      const std::string db = format_db(metrics::snr_db(io::read_grid(o.input), io::read_grid(o.input2), conv));
      std::cout << db << " dB\nsnr_db=" << db << '\n';
    } else if (*plot) {
      io::plot_heatmap(io::read_grid(o.input), o.output);
    } else if (*show) {
      std::cout << cfg.dump();
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
