#include <benchmark/benchmark.h>

#include <random>

#include "urllc/allocators.hpp"
#include "urllc/channel_model.hpp"
#include "urllc/f_table.hpp"
#include "urllc/matching.hpp"
#include "urllc/simulator.hpp"

namespace {

using namespace urllc;

struct Instance {
  std::vector<Device> devices;
  CycleSchedule schedule;
  std::vector<int> need;
  int C = 0;
};

// One allocation problem drawn like a simulated cycle without CSI.
Instance make_instance(int N, int C) {
  SimConfig cfg;
  cfg.N = N;
  cfg.C = C;
  Rng rng(17);
  Instance inst;
  inst.C = C;
  inst.devices = generate_topology(cfg, rng);
  const auto lambda = draw_interference(cfg, rng).lambda;
  inst.schedule = CycleSchedule::empty(cfg.T, C, cfg.delta, draw_pru_mask(cfg, rng));
  const auto link = cfg.link();
  for (const auto& d : inst.devices)
    for (int c = 0; c < C; ++c) inst.need.push_back(required_rus_no_csi(d.distance, lambda[c], cfg.rho, link));
  return inst;
}

RequirementProvider provider(const Instance& inst) {
  return [&inst](const Device& d, int c) { return inst.need[static_cast<std::size_t>(d.id * inst.C + c)]; };
}

void BM_Gba(benchmark::State& state) {
  const auto inst = make_instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto req = provider(inst);
  for (auto _ : state) benchmark::DoNotOptimize(gba_allocate(inst.devices, inst.schedule, req));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Gba)->ArgsProduct({{50, 100, 150, 200, 250}, {5, 10}})->Unit(benchmark::kMicrosecond);

void BM_Bca(benchmark::State& state) {
  const auto inst = make_instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto req = provider(inst);
  for (auto _ : state) benchmark::DoNotOptimize(bca_allocate(inst.devices, inst.schedule, req));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Bca)->ArgsProduct({{50, 100, 150, 200, 250}, {5, 10}})->Unit(benchmark::kMicrosecond);

void BM_Matching(benchmark::State& state) {
  const int n_right = static_cast<int>(state.range(0));
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> w(1, 60);
  BipartiteGraph g{10, n_right, {}};
  for (int l = 0; l < g.n_left; ++l)
    for (int r = 0; r < n_right; ++r) g.edges.push_back({l, r, w(rng)});
  for (auto _ : state) benchmark::DoNotOptimize(max_weight_matching(g));
  state.SetComplexityN(n_right);
}
BENCHMARK(BM_Matching)->RangeMultiplier(2)->Range(16, 256)->Complexity()->Unit(benchmark::kMicrosecond);

void BM_ConditionalQuantile(benchmark::State& state) {
  const auto params = gm_params(0.95, static_cast<int>(state.range(0)));
  double z = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(inverse_conditional_cdf(1e-5, z, params));
    z = z < 8.0 ? z + 0.37 : 0.1;
  }
}
BENCHMARK(BM_ConditionalQuantile)->Arg(1)->Arg(2)->Arg(10);

void BM_FTableBuild(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_f_table(0.95, 0.99999));
}
BENCHMARK(BM_FTableBuild)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
