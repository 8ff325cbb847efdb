#include <memory>
#include <random>

#include <benchmark/benchmark.h>

#include <chaplie/chaplie.hpp>

using namespace chaplie;

namespace {

const char* const kIds[] = {"so:4,1", "sl:3", "sp:2", "g2"};

ChaplyginModel model(const std::string& id) {
  const auto spec = parse_algebra_id(id);
  auto st = std::make_shared<const AlgebraStructure>(build_structure(spec, 7));
  return ChaplyginModel(st, default_w0(spec, *st), InertiaSpec::identity());
}

}  // namespace

static void BM_BuildStructure(benchmark::State& state) {
  const auto spec = parse_algebra_id(kIds[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(build_structure(spec, 7));
  state.SetLabel(kIds[state.range(0)]);
}
BENCHMARK(BM_BuildStructure)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

static void BM_Xnh(benchmark::State& state) {
  const auto m = model(kIds[state.range(0)]);
  std::mt19937_64 rng(1);
  const auto x = m.random_state(rng);
  for (auto _ : state) benchmark::DoNotOptimize(vector_field_Xnh(m, x));
  state.SetLabel(kIds[state.range(0)]);
}
BENCHMARK(BM_Xnh)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

// 100 RKMK4 steps
static void BM_Integrate(benchmark::State& state) {
  const auto m = model(kIds[state.range(0)]);
  std::mt19937_64 rng(2);
  const auto x = m.random_state(rng);
  IntegratorConfig c;
  c.h = 1e-3;
  c.T = 0.1;
  c.sample_every = 100;
  for (auto _ : state) benchmark::DoNotOptimize(integrate(m, x, c));
  state.SetLabel(kIds[state.range(0)]);
}
BENCHMARK(BM_Integrate)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

static void BM_HamResidual(benchmark::State& state) {
  const auto m = model(kIds[state.range(0)]);
  std::mt19937_64 rng(3);
  const Matrix s = m.random_group(rng);
  for (auto _ : state) benchmark::DoNotOptimize(ham_residual_at_0(m, s));
  state.SetLabel(kIds[state.range(0)]);
}
BENCHMARK(BM_HamResidual)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
