// Serial reference vs OpenMP kernels. Run with --benchmark_filter=... as usual;
// thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "dasdn/baselines.hpp"
#include "dasdn/cpunet/denoise.hpp"
#include "dasdn/cpunet/network.hpp"
#include "dasdn/dsp/fft.hpp"
#include "dasdn/patching.hpp"
#include "dasdn/random.hpp"
#include "dasdn/wavesim/kernels.hpp"
#include "dasdn/wavesim/model.hpp"

namespace {

using namespace dasdn;

Exec mode(const benchmark::State& s) { return s.range(0) == 0 ? Exec::serial : Exec::parallel; }

void label(benchmark::State& s) { s.SetLabel(s.range(0) == 0 ? "serial" : "parallel"); }

Grid2D noise_grid(std::size_t rows, std::size_t cols) {
  Rng rng(1);
  Grid2D g(rows, cols);
  for (double& v : g.values()) v = standard_normal(rng);
  return g;
}

void BM_WavesimStep(benchmark::State& s) {
  const auto model = wavesim::build_layered_model(wavesim::benchmark_model_spec());
  const auto md = wavesim::Medium::from_model(model);
  wavesim::Wavefield w(model.depth(), model.width());
  w.vz(5, 128) = 1.0f;
  const auto sponge = wavesim::sponge_factors(model.depth(), model.width(), {});
  const float dt = 1e-4f;
  for (auto _ : s) {
    wavesim::update_velocity(md, w, dt, mode(s));
    wavesim::update_stress(md, w, dt, mode(s));
    wavesim::image_free_surface(w);
    wavesim::apply_sponge(sponge, w, mode(s));
    benchmark::DoNotOptimize(w.vz.raw().data());
  }
  label(s);
}
BENCHMARK(BM_WavesimStep)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_MedianFilter(benchmark::State& s) {
  const Grid2D g = noise_grid(512, 256);
  for (auto _ : s) benchmark::DoNotOptimize(baselines::median_filter(g, {3, 5}, mode(s)));
  label(s);
}
BENCHMARK(BM_MedianFilter)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FilterTraces(benchmark::State& s) {
  const Grid2D g = noise_grid(512, 256);
  const baselines::BandpassConfig bp;
  for (auto _ : s) benchmark::DoNotOptimize(baselines::bandpass(g, bp, mode(s)));
  label(s);
}
BENCHMARK(BM_FilterTraces)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PredictPatches(benchmark::State& s) {
  cpunet::CPUNet net(cpunet::CPUNetConfig::synthetic());
  const auto patches = patching::extract_patches(noise_grid(512, 256), {48, 24});
  for (auto _ : s) benchmark::DoNotOptimize(cpunet::predict_patches(net, patches, mode(s)));
  s.counters["patches"] = static_cast<double>(patches.count());
  label(s);
}
BENCHMARK(BM_PredictPatches)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
