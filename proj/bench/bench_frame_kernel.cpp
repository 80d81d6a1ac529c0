// Serial reference vs OpenMP per-frame kernels, plus whole runs with each.
//   ./build/bench/bench_frame_kernel --benchmark_filter=Charge

#include <benchmark/benchmark.h>

#include "dchne/frame_kernel.hpp"
#include "dchne/simulator.hpp"

namespace {

using namespace dchne;

struct Network {
  std::vector<Node> nodes;
  std::vector<Joules> consumed;
  std::vector<std::uint8_t> transmits;
  std::vector<std::uint32_t> tx_per_cluster;
  std::vector<std::uint8_t> forwards;
  FramePlan plan;

  explicit Network(std::size_t n) {
    const std::size_t clusters = std::max<std::size_t>(1, n / 19);
    ArenaConfig arena;
    arena.node_count = n;
    const auto pos = place_nodes(arena);
    nodes.resize(n);
    consumed.assign(n, 0.0);
    transmits.assign(n, 1);
    tx_per_cluster.assign(clusters, 0);
    forwards.assign(clusters, 1);
    for (std::size_t i = 0; i < n; ++i) {
      nodes[i].id = static_cast<std::uint32_t>(i);
      nodes[i].pos = pos[i];
      nodes[i].residual = 1e9;  // stays alive for the whole benchmark
      nodes[i].cluster = static_cast<std::uint32_t>(i % clusters);
      nodes[i].role = i < clusters ? Role::kHead : Role::kMember;
      if (i >= clusters) ++tx_per_cluster[i % clusters];
    }
    plan.net = {350.0, n, clusters};
    plan.d_size = 4000;
    plan.bs = {175.0, 175.0};
    plan.transmits = transmits;
    plan.tx_per_cluster = tx_per_cluster;
    plan.forwards = forwards;
  }
};

void BM_ChargeFrame(benchmark::State& state, Exec exec) {
  Network net(static_cast<std::size_t>(state.range(0)));
  const EnergyParams p;
  for (auto _ : state) {
    benchmark::DoNotOptimize(charge_frame(net.nodes, net.consumed, net.plan, p, exec));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SenseFrame(benchmark::State& state, Exec exec) {
  Network net(static_cast<std::size_t>(state.range(0)));
  std::vector<std::uint8_t> awake(net.nodes.size()), event(net.nodes.size());
  ScenarioConfig scenario;
  scenario.kind = ScenarioKind::kScenario2;
  std::size_t frame = 0;
  for (auto _ : state) {
    sense_frame(net.nodes, 1, frame++, scenario, awake, event, exec);
    benchmark::DoNotOptimize(event.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Run(benchmark::State& state, bool parallel) {
  SimConfig cfg;
  cfg.arena.node_count = static_cast<std::size_t>(state.range(0));
  cfg.cluster_count = cfg.arena.node_count / 19;
  cfg.max_frames = 200;
  cfg.parallel_kernel = parallel;
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg).records.size());
}

}  // namespace

BENCHMARK_CAPTURE(BM_ChargeFrame, serial, Exec::kSerial)->RangeMultiplier(10)->Range(190, 190000);
BENCHMARK_CAPTURE(BM_ChargeFrame, openmp, Exec::kParallel)->RangeMultiplier(10)->Range(190, 190000);
BENCHMARK_CAPTURE(BM_SenseFrame, serial, Exec::kSerial)->RangeMultiplier(10)->Range(190, 190000);
BENCHMARK_CAPTURE(BM_SenseFrame, openmp, Exec::kParallel)->RangeMultiplier(10)->Range(190, 190000);
BENCHMARK_CAPTURE(BM_Run, serial, false)->Arg(190)->Arg(1900);
BENCHMARK_CAPTURE(BM_Run, openmp, true)->Arg(190)->Arg(1900);

BENCHMARK_MAIN();
