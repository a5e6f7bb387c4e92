#include <benchmark/benchmark.h>

#include "rabi/analysis.hpp"
#include "rabi/braak.hpp"
#include "rabi/dho.hpp"
#include "rabi/ops.hpp"
#include "rabi/spectrum.hpp"

using namespace rabi;

namespace {

const ModelParams kParams(0.7, 0.4);

void BM_F_rabi(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0)) + 0.37;
  for (auto _ : state) benchmark::DoNotOptimize(F_rabi(kParams, Parity::Plus, x));
}
BENCHMARK(BM_F_rabi)->Arg(0)->Arg(10)->Arg(100)->Arg(1000);

void BM_F_schweber(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(F_schweber(kParams, 2.37));
}
BENCHMARK(BM_F_schweber);

void BM_braak_G(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(braak_G(kParams, 2.37));
}
BENCHMARK(BM_braak_G);

void BM_sturm_count(benchmark::State& state) {
  const MonicRecurrence rec = MonicRecurrence::rabi(kParams, Parity::Plus, 0);
  const auto n = static_cast<index_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sturm_count(rec, 3.1, n));
}
BENCHMARK(BM_sturm_count)->Arg(200)->Arg(2000);

void BM_poly_zeros(benchmark::State& state) {
  const MonicRecurrence rec = MonicRecurrence::rabi(kParams, Parity::Plus, 0);
  const auto n = static_cast<index_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(poly_zeros(rec, n));
}
BENCHMARK(BM_poly_zeros)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_gauss_rule(benchmark::State& state) {
  const MonicRecurrence rec = MonicRecurrence::rabi(kParams, Parity::Plus, 0);
  for (auto _ : state) benchmark::DoNotOptimize(gauss_rule(rec, 100));
}
BENCHMARK(BM_gauss_rule)->Unit(benchmark::kMillisecond);

void BM_charlier_phi(benchmark::State& state) {
  const auto n = static_cast<index_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(charlier_phi(n, 1.3, 2.7));
}
BENCHMARK(BM_charlier_phi)->Arg(20)->Arg(200);

void BM_solve_spectrum(benchmark::State& state) {
  SolverOptions opts;
  opts.workers = 1;
  const auto levels = static_cast<index_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_spectrum(kParams, Parity::Plus, levels, opts));
}
BENCHMARK(BM_solve_spectrum)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_braak_spectrum(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(braak_spectrum(kParams, -1.0, 2.0));
}
BENCHMARK(BM_braak_spectrum)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
