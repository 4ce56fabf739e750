#include <benchmark/benchmark.h>

#include <random>

#include "treespectra/builders.hpp"
#include "treespectra/fourier.hpp"
#include "treespectra/oracle.hpp"

using namespace treespectra;

namespace {

const TreeModel& random_model() {
  static const TreeModel m = [] {
    std::mt19937_64 rng(1);
    RandomTreeOptions o;
    o.min_vertices = 200;
    return TreeModel(random_tree_description(rng, o));
  }();
  return m;
}

const TreeModel& regular3() {
  static const TreeModel m(regular_tree_description(2, 2));
  return m;
}

void BM_ZetaField(benchmark::State& state) {
  const auto& m = random_model();
  for (auto _ : state) benchmark::DoNotOptimize(compute_zeta_field(m, {0.3, 0.01}));
}
BENCHMARK(BM_ZetaField);

void BM_GreenAllPairs(benchmark::State& state) {
  const auto& m = random_model();
  const auto field = compute_zeta_field(m, {0.3, 0.01});
  const auto ball = m.ball(m.core_radius());
  for (auto _ : state) {
    Complex sum{};
    for (const auto& v : ball) {
      for (const auto& w : ball) sum += green_pair(field, v, w);
    }
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ball.size() * ball.size()));
}
BENCHMARK(BM_GreenAllPairs)->Unit(benchmark::kMillisecond);

void BM_DenseResolvent(benchmark::State& state) {
  const auto& m = random_model();
  DenseTruncation trunc(m, m.core_radius());
  for (auto _ : state) benchmark::DoNotOptimize(dense_resolvent_matrix(trunc, {0.3, 0.01}));
}
BENCHMARK(BM_DenseResolvent)->Unit(benchmark::kMillisecond);

void BM_KernelEntry(benchmark::State& state) {
  const auto& m = regular3();
  FourierOptions options;
  options.threads = static_cast<int>(state.range(0));
  const auto F = TestFunction::parse("poly:1,0,1");
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel_entry(m, F, m.origin(), m.parse_vertex("1.0"), EnergyWindow::full(), options));
  }
}
BENCHMARK(BM_KernelEntry)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_HornerOracle(benchmark::State& state) {
  const auto& m = regular3();
  DenseTruncation trunc(m, static_cast<int>(state.range(0)));
  const std::vector<Complex> c = {1.0, 0.5, -0.25, 0.1, 0.05};
  for (auto _ : state) benchmark::DoNotOptimize(polynomial_function_entry(trunc, c, m.origin(), m.origin()));
}
BENCHMARK(BM_HornerOracle)->Arg(8)->Arg(14)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
