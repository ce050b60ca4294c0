#include <benchmark/benchmark.h>

#include "hallbraid/kernel.hpp"
#include "hallbraid/quadrature.hpp"
#include "hallbraid/solver.hpp"
#include "hallbraid/transforms.hpp"

using namespace hallbraid;

namespace {

SpectralField dense_field(const GridSpec& g, double amplitude) {
  SpectralField c(g, 0.0);
  unsigned long long state = 12345;
  auto next = [&state]() {
    unsigned long long z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return static_cast<double>((z ^ (z >> 31)) >> 11) * 0x1.0p-53 - 0.5;
  };
  for (int n = 1; n <= g.ny; ++n) {
    c.at(0, n) = Complex(amplitude * next(), 0.0);
    for (int m = 1; m <= g.mmax(); ++m) {
      const Complex v(amplitude * next(), amplitude * next());
      c.at(m, n) = v;
      c.at(-m, n) = std::conj(v);
    }
  }
  return c;
}

void BM_InverseTransform(benchmark::State& state) {
  const GridSpec g(static_cast<int>(state.range(0)),
                   static_cast<int>(state.range(0)));
  const SpectralField c = dense_field(g, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(inverse_transform(c));
}
BENCHMARK(BM_InverseTransform)->Arg(16)->Arg(32)->Arg(64);

void BM_NonlinearTerm(benchmark::State& state) {
  const GridSpec g(static_cast<int>(state.range(0)),
                   static_cast<int>(state.range(0)));
  const SpectralField c = dense_field(g, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(nonlinear_term(c));
}
BENCHMARK(BM_NonlinearTerm)->Arg(16)->Arg(32)->Arg(64);

void BM_PicardWindow(benchmark::State& state) {
  const GridSpec g(static_cast<int>(state.range(0)),
                   static_cast<int>(state.range(0)));
  const ModelParams p(1.0, 0.5, 1.0);
  SolverConfig cfg;
  cfg.window = 1.0 / 64.0;
  cfg.nodes_per_window = 5;
  const SpectralField c = dense_field(g, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(picard_window(c, p, cfg));
}
BENCHMARK(BM_PicardWindow)->Arg(16)->Arg(32);

void BM_TwoKinkIntegral(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(
        two_kink_integral(4.0, 12.0, 1.1, 9.0, -3.0, 1.1));
}
BENCHMARK(BM_TwoKinkIntegral);

void BM_KernelSum(benchmark::State& state) {
  const WeightSpec spec(2.6, 0.55, 0.6);
  const ModelParams p(1.0, 0.0, 1.0);
  const int trunc = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        kernel_sum(5, 3, 125.0 / 9.0 + 1.0, {trunc, trunc}, spec, p));
}
BENCHMARK(BM_KernelSum)->Arg(8)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
