#include <benchmark/benchmark.h>

#include <cmath>

#include "uhit/quadrature.hpp"

namespace {

void bm_quad_gaussian_tail(benchmark::State& state) {
  using namespace uhit::quad;
  for (auto _ : state) {
    auto r = integrate([](double x) { return std::exp(-0.5 * x * x); },
                       SemiInfinite{0});
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(bm_quad_gaussian_tail);

}  // namespace

BENCHMARK_MAIN();
