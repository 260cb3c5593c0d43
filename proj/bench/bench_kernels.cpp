// Compares the OpenMP kernels against their serial reference implementations
// and times the per-scene profiling batch at different thread counts.
//
//   bench_kernels [threads]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "maskprof/object_factors.hpp"
#include "maskprof/pipeline.hpp"
#include "maskprof/raster.hpp"
#include "maskprof/rng.hpp"
#include "maskprof/synth.hpp"

using namespace maskprof;

namespace {

using Clock = std::chrono::steady_clock;

template <typename Fn>
double time_ms(Fn&& fn, int repeats = 3) {
  double best = 1e30;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = Clock::now();
    fn();
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    if (ms < best) best = ms;
  }
  return best;
}

GrayImage random_gray(Rng& rng, int w, int h) {
  GrayImage g = GrayImage::zeros(w, h);
  for (auto& v : g.values) v = static_cast<double>(draw_below(rng, 256));
  return g;
}

void row(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s %10.2f ms %10.2f ms %8.2fx\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
  const int threads = argc > 1 ? std::atoi(argv[1]) : omp_get_max_threads();
  omp_set_num_threads(threads);
  std::printf("threads: %d\n", threads);
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  Rng rng(42);
  const GrayImage big = random_gray(rng, 2048, 2048);
  GrayImage sink;
  row("sobel 2048x2048", time_ms([&] { sink = serial::sobel_magnitude(big); }),
      time_ms([&] { sink = sobel_magnitude(big); }));

  IntField field = IntField::zeros(1024, 1024);
  for (auto& v : field.values) v = static_cast<int>(draw_below(rng, 256));
  row("local entropy 1024x1024", time_ms([&] { sink = serial::local_entropy(field); }),
      time_ms([&] { sink = local_entropy(field); }));

  BinaryMask sites = BinaryMask::zeros(512, 512);
  for (int i = 0; i < 300; ++i)
    sites.set(static_cast<int>(draw_below(rng, 512)), static_cast<int>(draw_below(rng, 512)), 1);
  std::vector<long long> dist;
  row("distance field 512x512", time_ms([&] { dist = serial::distance_sq_field(sites); }),
      time_ms([&] { dist = distance_sq_field(sites); }));

  // scene batch: profile 200 generated scenes with 1 thread vs `threads`
  GeneratorConfig config;
  config.style = SynthStyle::complex_scenes;
  config.count = 200;
  config.seed = 7;
  const auto scenes = generate(config);
  auto profile_batch = [&] {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(scenes.size()); ++i)
      profile_scene(scenes[i], FactorSet::primary);
  };
  omp_set_num_threads(1);
  const double batch_serial = time_ms(profile_batch, 2);
  omp_set_num_threads(threads);
  const double batch_parallel = time_ms(profile_batch, 2);
  row("profile 200 scenes", batch_serial, batch_parallel);
  return 0;
}
