#include <benchmark/benchmark.h>

#include <cmath>

#include "halfspace/catalog.hpp"
#include "halfspace/extension.hpp"
#include "halfspace/growth.hpp"
#include "halfspace/poisson.hpp"
#include "halfspace/scenarios.hpp"

using namespace halfspace;

static void BM_SpectralSymbolLame(benchmark::State& state) {
  auto lame = make_lame(2, Cplx(1, 0), Cplx(1, 0)).system;
  double xi[1] = {1.5};
  for (auto _ : state) {
    xi[0] = xi[0] == 1.5 ? 2.5 : 1.5;  // defeat caching by alternating
    benchmark::DoNotOptimize(spectral_symbol(lame, xi, 0.7));
  }
}
BENCHMARK(BM_SpectralSymbolLame);

static void BM_WTransform(benchmark::State& state) {
  auto w = catalog_growth("example6", {{"alpha", 0.5}, {"beta", 0.5}});
  double t = 1.0;
  for (auto _ : state) {
    t = t == 1.0 ? std::exp(1.0) : 1.0;
    benchmark::DoNotOptimize(w_transform(w, t));
  }
}
BENCHMARK(BM_WTransform);

static void BM_ConicalSquare(benchmark::State& state) {
  const auto cat = harmonic_catalog();
  GradField g = harmonic_grad_field(cat[0]);
  ConeSpec cone;
  cone.vertex = {0.25};
  cone.aperture = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(conical_square(g, cone, 2.0, 1));
  }
}
BENCHMARK(BM_ConicalSquare);

static void BM_ExtendCos(benchmark::State& state) {
  auto K = PoissonKernel::closed_form_laplacian(2);
  const auto f = catalog_datum("cos");
  const double x[1] = {0.3};
  const double tol = std::pow(10.0, -double(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(extend_point(K, f, x, 1.0, tol));
  }
}
BENCHMARK(BM_ExtendCos)->Arg(3)->Arg(4)->Arg(5);

static void BM_Example6H(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(example6_H_bruteforce(-3.7, 12.9));
  }
}
BENCHMARK(BM_Example6H);

BENCHMARK_MAIN();
