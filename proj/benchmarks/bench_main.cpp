#include <benchmark/benchmark.h>

#include "unroll/alm_solver.hpp"
#include "unroll/degradation.hpp"
#include "unroll/fft.hpp"
#include "unroll/metrics.hpp"
#include "unroll/pipeline.hpp"

using namespace unroll;

namespace {

Degraded sample(int size) {
  DegradeSpec spec;
  spec.kernel = {GaussianBlur{1.5}, 31};
  spec.illum_scale = 0.2;
  spec.noise_sigma = 0.005;
  return degrade(synthetic_scene(size, size, 3, 1), spec);
}

void BM_conv_spatial(benchmark::State& st) {
  const Image x = synthetic_scene(static_cast<int>(st.range(0)), static_cast<int>(st.range(0)), 3, 1);
  const Kernel k = make_kernel({GaussianBlur{1.5}, static_cast<int>(st.range(1))});
  for (auto _ : st) benchmark::DoNotOptimize(conv2d_circular(x, k));
}
BENCHMARK(BM_conv_spatial)->Args({64, 7})->Args({64, 31})->Args({128, 31});

void BM_fft_round_trip(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const Image x = synthetic_scene(n, n, 3, 2);
  for (auto _ : st) benchmark::DoNotOptimize(inverse_fft(forward_fft(x)));
}
BENCHMARK(BM_fft_round_trip)->Arg(64)->Arg(128)->Arg(256);

void BM_update_latent(benchmark::State& st) {
  const Degraded d = sample(static_cast<int>(st.range(0)));
  const HyperParams h;
  const SolverState s = init_state(d.degraded, h.init);
  for (auto _ : st) benchmark::DoNotOptimize(update_latent(s, d.degraded, d.kernel, h));
}
BENCHMARK(BM_update_latent)->Arg(64)->Arg(128)->Arg(256);

void BM_run_block(benchmark::State& st) {
  const Degraded d = sample(static_cast<int>(st.range(0)));
  const HyperParams h;
  const DataOperators ops;
  const SolverState init = init_state(d.degraded, h.init);
  for (auto _ : st) {
    SolverState s = init;
    benchmark::DoNotOptimize(run_block(s, d.degraded, d.kernel, h, ops, 1));
  }
}
BENCHMARK(BM_run_block)->Arg(64)->Arg(128);

void BM_restore(benchmark::State& st) {
  const Degraded d = sample(64);
  for (auto _ : st)
    benchmark::DoNotOptimize(restore(d.degraded, d.kernel, HyperParams{}, DataOperators{}, EnhanceSpec{}));
}
BENCHMARK(BM_restore)->Unit(benchmark::kMillisecond);

void BM_ssim(benchmark::State& st) {
  const Image a = synthetic_scene(128, 128, 3, 3);
  const Image b = synthetic_scene(128, 128, 3, 4);
  for (auto _ : st) benchmark::DoNotOptimize(ssim(a, b));
}
BENCHMARK(BM_ssim);

}  // namespace

BENCHMARK_MAIN();
