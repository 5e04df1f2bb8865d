// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance [--only N[,M...]]
//
// Criteria 5-8 share one synthetic benchmark gather (256 channels, strain rate,
// benchmark model) and the benchmark training settings (RunConfig::benchmark()).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dasdn/baselines.hpp"
#include "dasdn/config.hpp"
#include "dasdn/cpunet/network.hpp"
#include "dasdn/io/dgrid.hpp"
#include "dasdn/metrics.hpp"
#include "dasdn/nn/layers.hpp"
#include "dasdn/nn/loss.hpp"
#include "dasdn/nn/modules.hpp"
#include "dasdn/noise.hpp"
#include "dasdn/patching.hpp"
#include "dasdn/pipeline.hpp"
#include "dasdn/wavesim/ricker.hpp"
#include "dasdn/wavesim/simulate.hpp"
#include "support.hpp"

namespace {

using namespace dasdn;
using nn::Matrix;
using nn::Mode;
using testing::gradient_check;
using testing::random_matrix;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

// --- 1. gradients ------------------------------------------------------------

Outcome gradients() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(2024);
  double worst = 0.0;
  std::string where;
  auto note = [&](double e, const std::string& what) {
    if (e > worst) {
      worst = e;
      where = what;
    }
  };

  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::Index in = 3 + trial, out = 8 - trial, batch = 3;
    const Matrix x = random_matrix(rng, in, batch);

    nn::Dense d(in, out);
    d.init(rng);
    d.params().bias = random_matrix(rng, out, 1);
    std::vector<nn::ParamBlock> db;
    d.collect("d", db);
    note(gradient_check([&](const Matrix& v) { return d.forward(v); }, [&](const Matrix& g) { return d.backward(g); },
                        [&] { d.zero_grad(); }, db, x, random_matrix(rng, out, batch)),
         "dense");

    nn::LayerNorm n(in, 1e-5);
    n.params().gamma = random_matrix(rng, in, 1);
    n.params().beta = random_matrix(rng, in, 1);
    std::vector<nn::ParamBlock> nb;
    n.collect("n", nb);
    note(gradient_check([&](const Matrix& v) { return n.forward(v); }, [&](const Matrix& g) { return n.backward(g); },
                        [&] { n.zero_grad(); }, nb, x, random_matrix(rng, in, batch)),
         "layer norm");

    nn::LeakyRelu a({0.2});
    note(gradient_check([&](const Matrix& v) { return a.forward(v); }, [&](const Matrix& g) { return a.backward(g); },
                        [] {}, {}, x, random_matrix(rng, in, batch)),
         "leaky relu");

    nn::Dropout drop({0.3, 99, Mode::train});
    note(gradient_check(
             [&](const Matrix& v) {
               drop.reseed();
               return drop.forward(v, Mode::train);
             },
             [&](const Matrix& g) { return drop.backward(g); }, [] {}, {}, x, random_matrix(rng, in, batch)),
         "dropout");

    const Matrix y = random_matrix(rng, in, batch, 2.0);
    Matrix xv = x * 2.0;
    const Matrix analytic = nn::huber_grad(xv, y, {1.2});
    const auto numeric =
        testing::numeric_gradient(testing::span_of(xv), [&] { return nn::huber_loss(xv, y, {1.2}); });
    note(testing::relative_error(testing::span_of(analytic), numeric), "huber");

    cpunet::CPMLayer cpm({in, out, {0.5, 0.25, 0.25}, {0.2, 0.2, 1e-5}}, 40 + trial);
    cpm.init(rng);
    std::vector<nn::ParamBlock> cb;
    cpm.collect("cpm", cb);
    testing::randomize_norms(cb, rng);
    note(gradient_check(
             [&](const Matrix& v) {
               cpm.reseed();
               return cpm.forward(v, Mode::train);
             },
             [&](const Matrix& g) { return cpm.backward(g); }, [&] { cpm.zero_grad(); }, cb, x,
             random_matrix(rng, out, batch)),
         "cpm");

    cpunet::CMLayer cm(out, {0.2, 0.2, 1e-5}, 70 + trial);
    cm.init(rng);
    std::vector<nn::ParamBlock> mb;
    cm.collect("cm", mb);
    testing::randomize_norms(mb, rng);
    note(gradient_check(
             [&](const Matrix& v) {
               cm.reseed();
               return cm.forward(v, Mode::train);
             },
             [&](const Matrix& g) { return cm.backward(g); }, [&] { cm.zero_grad(); }, mb,
             random_matrix(rng, out, batch), random_matrix(rng, out, batch)),
         "cm");
  }

  // Composed network, every width <= 8 (see the ledger for the layer-norm eps).
  cpunet::CPUNetConfig c;
  c.input_dim = 16;
  c.encoder_dims = {8, 8, 6, 6};
  c.decoder_dims = {6, 6, 8, 8};
  c.unit.dropout = 0.2;
  c.unit.ln_eps = 0.1;
  c.seed = 5;
  cpunet::CPUNet net(c);
  testing::randomize_norms(net.parameters(), rng);
  note(gradient_check(
           [&](const Matrix& v) {
             net.reseed_dropout();
             return net.forward(v, Mode::train);
           },
           [&](const Matrix& g) { return net.backward(g); }, [&] { net.zero_grad(); }, net.parameters(),
           random_matrix(rng, 16, 4), random_matrix(rng, 16, 4)),
       "shrunken CP-UNet");

  const double secs = seconds_since(t0);
  return {worst <= 1e-4 && secs < 60.0,
          fmt("worst relative error %.2e (%s), %.1f s", worst, where.c_str(), secs)};
}

// --- 2. patch round trip -----------------------------------------------------

Outcome patch_round_trip() {
  Rng rng(77);
  int ok = 0, nondivisible = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t c = 2 + uniform_index(rng, 60);
    const std::size_t d = uniform_index(rng, c);
    const std::size_t h = c + uniform_index(rng, 4 * c);
    const std::size_t w = c + uniform_index(rng, 4 * c);
    const std::size_t stride = c - d;
    if ((h - c) % stride != 0 || (w - c) % stride != 0) ++nondivisible;
    const Grid2D g = testing::random_grid(rng, h, w);
    ok += patching::reconstruct(patching::extract_patches(g, {c, d})) == g ? 1 : 0;
  }
  return {ok == 50 && nondivisible > 0, fmt("%d/50 exact, %d with non-divisible dims", ok, nondivisible)};
}

// --- 3. simulator ------------------------------------------------------------

double onset(const std::vector<double>& x, double dt, double frac) {
  double mx = 0.0;
  for (double v : x) mx = std::max(mx, std::abs(v));
  for (std::size_t k = 1; k < x.size(); ++k) {
    if (std::abs(x[k]) >= frac * mx) {
      const double a = std::abs(x[k - 1]), b = std::abs(x[k]);
      return (static_cast<double>(k - 1) + (frac * mx - a) / (b - a)) * dt;
    }
  }
  return -1.0;
}

Outcome simulator() {
  const auto t0 = std::chrono::steady_clock::now();
  using namespace wavesim;
  bool pass = true;
  std::ostringstream detail;

  // Direct arrival, source at depth d under the receiver; onset pick minus the
  // wavelet's own onset at the same threshold.
  const double vp = 2000.0, dx = 1.0;
  double worst_cells = 0.0;
  for (double d : {60.0, 100.0, 150.0}) {
    const auto m = homogeneous_model(static_cast<std::size_t>(d) + 70, 256, dx, vp, vp / std::sqrt(3.0), 2000.0);
    SourceConfig s;
    s.x = 128.0;
    s.z = d;
    s.t0 = 0.03;
    SimConfig c;
    c.nt_out = 200;
    c.recording = Recording::particle_velocity;
    const auto g = simulate_shot(m, s, c);
    std::vector<double> tr(c.nt_out);
    for (std::size_t k = 0; k < c.nt_out; ++k) tr[k] = g.data(k, 128);
    const double pick = onset(tr, c.dt_out, 0.1) - onset(ricker_trace(s.f0, 0.03, c.dt_out, c.nt_out), c.dt_out, 0.1);
    worst_cells = std::max(worst_cells, std::abs(pick - d / vp) / (dx / vp));
  }
  pass = pass && worst_cells <= 2.0;
  detail << fmt("arrival error <= %.2f cells", worst_cells);

  // Energy after the wavelet has passed: no step grows by more than 1%.
  {
    const auto m = homogeneous_model(256, 256, dx, vp, vp / std::sqrt(3.0), 2000.0);
    SourceConfig s;
    s.z = 100.0;
    s.t0 = 0.03;
    SimConfig c;
    c.nt_out = 400;
    c.track_energy = true;
    const auto r = simulate(m, s, c);
    double worst_growth = 0.0;
    for (std::size_t k = 80; k + 1 < r.energy.size(); ++k) {
      worst_growth = std::max(worst_growth, r.energy[k + 1] / r.energy[k] - 1.0);
    }
    const bool ok = worst_growth <= 0.01 && r.energy.back() < r.energy[80];
    pass = pass && ok;
    detail << fmt("; homogeneous max step growth %.2e%%", 100.0 * worst_growth);
  }

  // Full benchmark-model run: finite, and energy ends below its peak.
  {
    const auto m = build_layered_model(benchmark_model_spec());
    SimConfig c;
    c.track_energy = true;
    const auto r = simulate(m, SourceConfig{}, c);
    const double peak = *std::max_element(r.energy.begin(), r.energy.end());
    bool finite = std::all_of(r.energy.begin(), r.energy.end(), [](double e) { return std::isfinite(e); });
    for (double v : r.gather.data.values()) finite = finite && std::isfinite(v);
    const bool ok = finite && r.energy.back() <= peak;
    pass = pass && ok;
    detail << fmt("; benchmark run finite=%s end/peak energy %.3f", finite ? "yes" : "no", r.energy.back() / peak);
  }

  // Ricker spectrum peak, direct DFT on a 0.25 Hz grid.
  double worst_rel = 0.0;
  for (double f0 : {30.0, 50.0, 75.0}) {
    const auto w = ricker_trace(f0, 0.1, 0.001, 400);
    double best = 0.0, fbest = 0.0;
    for (double f = 1.0; f < 500.0; f += 0.25) {
      std::complex<double> s = 0.0;
      for (std::size_t k = 0; k < w.size(); ++k)
        s += w[k] * std::polar(1.0, -2.0 * std::numbers::pi * f * 0.001 * static_cast<double>(k));
      if (std::abs(s) > best) {
        best = std::abs(s);
        fbest = f;
      }
    }
    worst_rel = std::max(worst_rel, std::abs(fbest - f0) / f0);
  }
  pass = pass && worst_rel <= 0.05;
  detail << fmt("; ricker peak within %.1f%% of f0; %.0f s", 100.0 * worst_rel, seconds_since(t0));
  return {pass, detail.str()};
}

// --- 4. noise calibration ----------------------------------------------------

Outcome noise_calibration(const Grid2D& clean) {
  Rng rng(31);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Grid2D x = testing::random_grid(rng, 64, 48, uniform(rng, 0.01, 100.0));
    const Grid2D n = testing::random_grid(rng, 64, 48, uniform(rng, 0.01, 100.0));
    for (double t : {-0.5, 0.0, 1.5})
      worst = std::max(worst, std::abs(metrics::snr_db(x, noise::mix_to_snr(x, n, t).noisy) - t));
  }
  // The benchmark blend on the real gather.
  RunConfig cfg = RunConfig::benchmark();
  for (double t : {-0.5, 0.0, 1.5}) {
    cfg.target_snr = t;
    const auto c = pipeline::corrupt(clean, cfg);
    worst = std::max(worst, std::abs(metrics::snr_db(clean, c.noisy) - t));
  }
  return {worst <= 0.01, fmt("worst |S/N - target| = %.2e dB over targets {-0.5, 0, 1.5}", worst)};
}

// --- 5-8. benchmark ----------------------------------------------------------

struct Bench {
  Grid2D clean;
  std::map<std::uint64_t, Grid2D> noisy;  // per seed
  std::map<std::pair<std::uint64_t, int>, double> cpunet;  // (seed, alpha * 10) -> S/N
  std::map<std::uint64_t, std::vector<double>> history;  // seed -> loss history at alpha 1.2
  std::map<std::uint64_t, Grid2D> denoised;               // seed -> CP-UNet output at alpha 1.2

  static RunConfig config(std::uint64_t seed, double alpha = 1.2) {
    RunConfig c = RunConfig::benchmark();
    c.seed = seed;
    c.train.huber.alpha = alpha;
    return c;
  }

  const Grid2D& noisy_for(std::uint64_t seed) {
    auto it = noisy.find(seed);
    if (it == noisy.end()) it = noisy.emplace(seed, pipeline::corrupt(clean, config(seed)).noisy).first;
    return it->second;
  }

  double cpunet_snr(std::uint64_t seed, int alpha10) {
    const auto key = std::make_pair(seed, alpha10);
    if (auto it = cpunet.find(key); it != cpunet.end()) return it->second;
    const RunConfig cfg = config(seed, alpha10 / 10.0);
    const Grid2D& y = noisy_for(seed);
    auto t = pipeline::train_cpunet(std::span<const Grid2D>(&y, 1), cfg);
    Grid2D den = pipeline::denoise(*t.net, t.stats, y, cfg);
    const double s = metrics::snr_db(clean, den);
    if (alpha10 == 12) {
      history[seed] = t.loss_history;
      denoised[seed] = std::move(den);
    }
    std::fprintf(stderr, "  seed %llu alpha %.1f: CP-UNet %.3f dB\n", static_cast<unsigned long long>(seed),
                 alpha10 / 10.0, s);
    return cpunet[key] = s;
  }
};

Outcome denoising_gain(Bench& b) {
  const double before = metrics::snr_db(b.clean, b.noisy_for(0));
  const double after = b.cpunet_snr(0, 12);
  const double gain = after - before;
  return {gain >= 6.0 && std::abs(before - 0.5) <= 1.0,
          fmt("input %.2f dB -> CP-UNet %.2f dB, gain %.2f dB (100 epochs)", before, after, gain)};
}

Outcome ordering(Bench& b) {
  int held = 0;
  std::ostringstream detail;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const RunConfig cfg = Bench::config(seed);
    const Grid2D& y = b.noisy_for(seed);
    const double cp = b.cpunet_snr(seed, 12);
    baselines::AutoencoderConfig ac;
    ac.unit = cfg.unit;
    ac.seed = cfg.model_seed();
    const double ae = metrics::snr_db(
        b.clean, baselines::plain_autoencoder_denoise(y, ac, cfg.training(), cfg.patch, cfg.training_patch()).denoised);
    const double med = metrics::snr_db(b.clean, baselines::median_filter(y, cfg.median));
    auto bp = cfg.bandpass;
    bp.fs = 1.0 / cfg.sim.dt_out;
    const double band = metrics::snr_db(b.clean, baselines::bandpass(y, bp));
    const bool ok = cp > ae && ae > med && cp > band;
    held += ok ? 1 : 0;
    detail << fmt("%sseed %llu: cp %.2f ae %.2f med %.2f bp %.2f%s", seed ? "; " : "",
                  static_cast<unsigned long long>(seed), cp, ae, med, band, ok ? "" : " (violated)");
  }
  return {held >= 4, fmt("%d/5 seeds ordered; ", held) + detail.str()};
}

Outcome alpha_sweep(Bench& b) {
  const std::vector<int> alphas{10, 11, 12, 13, 14};
  int held = 0;
  std::ostringstream detail;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    int best = alphas.front();
    for (int a : alphas)
      if (b.cpunet_snr(seed, a) > b.cpunet_snr(seed, best)) best = a;
    const bool ok = best >= 11 && best <= 13;
    held += ok ? 1 : 0;
    detail << fmt("%sseed %llu best alpha %.1f", seed ? "; " : "", static_cast<unsigned long long>(seed), best / 10.0);
  }
  return {held >= 4, fmt("%d/5 seeds peak at alpha in {1.1, 1.2, 1.3}; ", held) + detail.str()};
}

Outcome determinism(Bench& b) {
  // Second full run from scratch: synthesize, corrupt, train, denoise.
  const RunConfig cfg = Bench::config(0);
  const Grid2D clean = pipeline::synthesize(cfg);
  const Grid2D noisy = pipeline::corrupt(clean, cfg).noisy;
  auto t = pipeline::train_cpunet(std::span<const Grid2D>(&noisy, 1), cfg);
  const Grid2D den = pipeline::denoise(*t.net, t.stats, noisy, cfg);

  b.cpunet_snr(0, 12);
  const bool same_clean = io::encode_dgrid(clean, io::DType::f64) == io::encode_dgrid(b.clean, io::DType::f64);
  const bool same_noisy = io::encode_dgrid(noisy, io::DType::f64) == io::encode_dgrid(b.noisy_for(0), io::DType::f64);
  const bool same_den = io::encode_dgrid(den, io::DType::f64) == io::encode_dgrid(b.denoised.at(0), io::DType::f64) &&
                        io::encode_dgrid(den, io::DType::f32) == io::encode_dgrid(b.denoised.at(0), io::DType::f32);
  const bool same_hist = t.loss_history == b.history.at(0);
  return {same_clean && same_noisy && same_den && same_hist,
          fmt("clean %s, noisy %s, denoised %s, loss history %s", same_clean ? "identical" : "DIFFERS",
              same_noisy ? "identical" : "DIFFERS", same_den ? "identical" : "DIFFERS",
              same_hist ? "identical" : "DIFFERS")};
}

// --- 9. baseline filters -----------------------------------------------------

Outcome filters() {
  const baselines::BandpassConfig bp;
  const std::size_t n = 1000;
  const double fs = 1000.0;
  std::vector<double> pass_f, stop_f;
  for (double f = bp.f_lo; f <= bp.f_hi; f += 1.0) pass_f.push_back(f);
  for (double f = bp.f_hi + bp.taper; f < fs / 2.0; f += 1.0) stop_f.push_back(f);
  stop_f.push_back(2.0 * (bp.f_hi + bp.taper));

  auto response = [&](const std::vector<double>& freqs) {
    Grid2D x(n, freqs.size());
    for (std::size_t c = 0; c < freqs.size(); ++c)
      for (std::size_t t = 0; t < n; ++t)
        x(t, c) = std::cos(2.0 * std::numbers::pi * freqs[c] * static_cast<double>(t) / fs + 0.7);
    const Grid2D y = baselines::bandpass(x, bp);
    std::vector<double> gain(freqs.size());
    for (std::size_t c = 0; c < freqs.size(); ++c) {
      double ex = 0.0, ey = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        ex += x(t, c) * x(t, c);
        ey += y(t, c) * y(t, c);
      }
      gain[c] = std::sqrt(ey / ex);
    }
    return gain;
  };
  double ripple = 0.0;
  for (double g : response(pass_f)) ripple = std::max(ripple, std::abs(g - 1.0));
  double leak = 0.0;
  for (double g : response(stop_f)) leak = std::max(leak, g);
  const double rejection_db = leak > 0.0 ? -20.0 * std::log10(leak) : INFINITY;

  Grid2D spike(64, 64);
  spike(31, 17) = 100.0;
  const Grid2D m = baselines::median_filter(spike, {1, 3});
  const bool spike_gone = std::all_of(m.values().begin(), m.values().end(), [](double v) { return v == 0.0; });

  return {ripple < 0.01 && rejection_db >= 40.0 && spike_gone,
          fmt("passband ripple %.2e, stopband rejection %s dB, median spike %s", ripple,
              std::isinf(rejection_db) ? "inf" : fmt("%.1f", rejection_db).c_str(),
              spike_gone ? "removed" : "NOT removed")};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      std::stringstream s(argv[++i]);
      for (std::string tok; std::getline(s, tok, ',');) only.insert(std::stoi(tok));
    } else {
      std::fprintf(stderr, "usage: acceptance [--only N[,M...]]\n");
      return 2;
    }
  }
  auto wanted = [&](int k) { return only.empty() || only.count(k) > 0; };

  Bench bench;
  auto need_clean = [&] {
    if (bench.clean.empty()) {
      std::fprintf(stderr, "  simulating the benchmark gather...\n");
      bench.clean = pipeline::synthesize(Bench::config(0));
    }
  };

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"gradient suite", gradients},
      {"patch round trip", patch_round_trip},
      {"simulator sanity", simulator},
      {"noise calibration",
       [&] {
         need_clean();
         return noise_calibration(bench.clean);
       }},
      {"end-to-end denoising gain",
       [&] {
         need_clean();
         return denoising_gain(bench);
       }},
      {"method ordering",
       [&] {
         need_clean();
         return ordering(bench);
       }},
      {"alpha unimodality",
       [&] {
         need_clean();
         return alpha_sweep(bench);
       }},
      {"determinism",
       [&] {
         need_clean();
         return determinism(bench);
       }},
      {"baseline filter correctness", filters},
  };

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!wanted(id)) continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
