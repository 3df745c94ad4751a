// Micro benchmarks: batched line solves per direction, one heat step,
// one boundary exchange.

#include <random>

#include <benchmark/benchmark.h>

#include "yinyang/coupling.hpp"
#include "yinyang/heat.hpp"
#include "yinyang/parallel.hpp"
#include "yinyang/stencil.hpp"
#include "yinyang/tridiag.hpp"

using namespace yy;

namespace {

MacGrid grid_for(int m) { return build_domain({1, 2, 0.1}, {4 * m, 12 * m, 24 * m, {}}).yin; }

Field random_field(const MacGrid& g, unsigned seed) {
  Field f = make_scalar(g);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  for_interior(f.dims(), [&](int i, int j, int k) { f(i, j, k) = U(rng); });
  return f;
}

// args: grid multiplier, direction, workers
void BM_BatchSolve(benchmark::State& st) {
  const MacGrid g = grid_for(static_cast<int>(st.range(0)));
  const Dir d = static_cast<Dir>(st.range(1));
  WorkerPool pool(static_cast<int>(st.range(2)));
  const Field rhs0 = random_field(g, 1);
  const auto n = rhs0.dims();
  Field lo = make_scalar(g, -1.0), di = make_scalar(g, 2.0), up = make_scalar(g, -1.0);
  Field rhs = rhs0;
  LineBatch b;
  b.dir = d;
  b.dims = n;
  b.lower = lo.data();
  b.diag = di.data();
  b.upper = up.data();
  b.alpha = 0.5;
  b.beta = 1.0;
  for (auto _ : st) {
    st.PauseTiming();
    rhs = rhs0;
    b.rhs = rhs.data();
    st.ResumeTiming();
    batch_solve(b, &pool);
    benchmark::DoNotOptimize(rhs.data());
  }
  st.SetItemsProcessed(st.iterations() * b.line_count());
}
BENCHMARK(BM_BatchSolve)
    ->ArgsProduct({{2, 4}, {0, 1, 2}, {1, 4}})
    ->ArgNames({"m", "dir", "workers"})
    ->Unit(benchmark::kMicrosecond);

void BM_HeatStep(benchmark::State& st) {
  const MacGrid g = grid_for(static_cast<int>(st.range(0)));
  WorkerPool pool(static_cast<int>(st.range(1)));
  ThermalState s;
  s.T_n = random_field(g, 2);
  s.T_nm1 = s.T_n;
  s.tau = 1e-3;
  HeatConfig hc;
  hc.boundary = [](double, const Vec3&) { return 0.0; };
  for (auto _ : st) benchmark::DoNotOptimize(douglas_step(g, s, hc, nullptr, &pool));
}
BENCHMARK(BM_HeatStep)->ArgsProduct({{2, 4, 8}, {1, 4}})->ArgNames({"m", "workers"})->Unit(benchmark::kMillisecond);

void BM_Exchange(benchmark::State& st) {
  const int m = static_cast<int>(st.range(0));
  const YinYangDomain dom = build_domain({1, 2, 0.1}, {6 * m, 18 * m, 36 * m, {}});
  const auto maps = build_exchange_maps(dom, 3);
  const Field donor = random_field(dom.yang, 3);
  Field target = random_field(dom.yin, 4);
  VectorField ud = make_vector(dom.yang, 1.0), ut = make_vector(dom.yin);
  for (auto _ : st) {
    exchange_scalar(maps[0], donor, target);
    exchange_pressure(maps[0], donor, target);
    exchange_velocity(maps[0], ud, ut);
    benchmark::DoNotOptimize(target.data());
  }
}
BENCHMARK(BM_Exchange)->Arg(1)->Arg(2)->ArgName("m")->Unit(benchmark::kMicrosecond);

void BM_BuildExchangeMaps(benchmark::State& st) {
  const YinYangDomain dom = build_domain({1, 2, 0.1}, {12, 36, 72, {}});
  for (auto _ : st) benchmark::DoNotOptimize(build_exchange_maps(dom, 3));
}
BENCHMARK(BM_BuildExchangeMaps)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
