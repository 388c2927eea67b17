#include <benchmark/benchmark.h>

#include "focklab/geometry.hpp"
#include "focklab/kernel.hpp"
#include "focklab/moments.hpp"
#include "focklab/operators.hpp"
#include "focklab/weights.hpp"

using namespace focklab;

namespace {

const MomentTable& gaussian_table() {
  static const MomentTable t = build_moment_table(
      parse_weight("monomial:p=2"), 1, 4096, MomentMethod::hybrid);
  return t;
}

void bm_moment_table_quadrature(benchmark::State& state) {
  const Weight w = parse_weight("monomial:p=2");
  const int d_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    MomentTable t = build_moment_table(w, 1, d_max, MomentMethod::quadrature);
    benchmark::DoNotOptimize(t.log_s.data());
  }
  state.SetItemsProcessed(state.iterations() * (d_max + 1));
}
BENCHMARK(bm_moment_table_quadrature)->Arg(64)->Arg(256);

void bm_moment_table_hybrid(benchmark::State& state) {
  const Weight w = parse_weight("monomial:p=2");
  const int d_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    MomentTable t = build_moment_table(w, 1, d_max, MomentMethod::hybrid);
    benchmark::DoNotOptimize(t.log_s.data());
  }
  state.SetItemsProcessed(state.iterations() * (d_max + 1));
}
BENCHMARK(bm_moment_table_hybrid)->Arg(1024)->Arg(8192);

void bm_kernel_eval(benchmark::State& state) {
  const MomentTable& t = gaussian_table();
  const double r = static_cast<double>(state.range(0));
  for (auto _ : state) {
    ScaledKernelValue v = eval_kernel_scaled(t, r, 0.7);
    benchmark::DoNotOptimize(v.log_modulus);
  }
}
BENCHMARK(bm_kernel_eval)->Arg(4)->Arg(64)->Arg(512);

void bm_metric(benchmark::State& state) {
  const MomentTable& t = gaussian_table();
  const CVec z = {C(5.0, 2.0)};
  const CVec xi = {C(0.3, -1.1)};
  for (auto _ : state) {
    MetricSample m = metric(t, z, xi);
    benchmark::DoNotOptimize(m.beta2);
  }
}
BENCHMARK(bm_metric);

void bm_grid_distance(benchmark::State& state) {
  const MomentTable& t = gaussian_table();
  const CVec z = {C(0.5, 0.0)}, w = {C(4.0, 1.0)};
  for (auto _ : state) {
    DistanceResult d = distance(t, z, w, DistanceMethod::grid);
    benchmark::DoNotOptimize(d.rho_hat);
  }
}
BENCHMARK(bm_grid_distance);

void bm_hankel_spectrum(benchmark::State& state) {
  const NormalizedBasis basis(build_moment_table(
      parse_weight("monomial:p=2"), 1, 2048, MomentMethod::hybrid));
  const int d_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    HankelSpectrum h = hankel_spectrum(basis, 1, d_max);
    benchmark::DoNotOptimize(h.lambda.data());
  }
}
BENCHMARK(bm_hankel_spectrum)->Arg(256)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
