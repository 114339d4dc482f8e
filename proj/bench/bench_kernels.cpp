// Serial reference vs OpenMP paths of the heavy kernels.
// Run: superad_bench [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include <vector>

#include "superad/expansion.hpp"
#include "superad/oscillatory.hpp"
#include "superad/pole_kernels.hpp"

using namespace superad;

namespace {

template <class Coeff>
std::vector<PoleFunction<Coeff>> leading_coefficients(int n) {
  const auto table = ExpansionTable<Coeff>::build(n);
  std::vector<PoleFunction<Coeff>> g;
  for (int k = 1; k <= n; ++k) g.push_back(table.g(k));
  return g;
}

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::parallel : Exec::serial; }

void BM_PairSumFloat(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = leading_coefficients<std::complex<double>>(n);
  const auto w = pair_weights<double>(n);
  const Exec exec = exec_of(state);
  for (auto _ : state) {
    auto s = pair_sum<std::complex<double>>(g, n, 1, n - 1, w, exec);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_PairSumFloat)->ArgsProduct({{200, 800}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_PairSumExact(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = leading_coefficients<ComplexRational>(n);
  const auto w = pair_weights_exact(n);
  const Exec exec = exec_of(state);
  for (auto _ : state) {
    auto s = pair_sum<ComplexRational>(g, n, 1, n - 1, w, exec);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_PairSumExact)->ArgsProduct({{30, 40}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_FloatTableBuild(benchmark::State& state) {
  BuildOptions opts;
  opts.exec = exec_of(state);
  for (auto _ : state) {
    auto t = FloatTable<double>::build(static_cast<int>(state.range(0)), opts);
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(BM_FloatTableBuild)->ArgsProduct({{300, 600}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_QuadratureGrid(benchmark::State& state) {
  const auto spec = IntegralSpec::with_m(static_cast<int>(state.range(0)), PoleSign::plus, 0);
  std::vector<double> ts;
  for (int i = 0; i <= 40; ++i) ts.push_back(-1 + i * 0.05);
  QuadratureOptions opts;
  opts.exec = exec_of(state);
  for (auto _ : state) {
    auto r = quadrature_grid(spec, ts, 1e-9, opts);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_QuadratureGrid)->ArgsProduct({{20, 50}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
