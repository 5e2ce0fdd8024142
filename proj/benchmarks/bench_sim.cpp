#include <benchmark/benchmark.h>

#include "lorafall/report.hpp"
#include "lorafall/simulator.hpp"

namespace {

lorafall::ScenarioConfig desk(int k, double f) {
  lorafall::ScenarioConfig c;
  c.k_apps = k;
  c.failure_fraction = f;
  return c;
}

void BM_FullRun(benchmark::State& state) {
  auto cfg = desk(static_cast<int>(state.range(0)),
                  static_cast<double>(state.range(1)) / 100.0);
  for (auto _ : state) {
    auto r = lorafall::run_scenario(cfg);
    benchmark::DoNotOptimize(r.summary.snapshot_hash);
  }
}
BENCHMARK(BM_FullRun)->Args({10, 0})->Args({100, 0})->Args({100, 100});

void BM_Step(benchmark::State& state) {
  for (auto _ : state) {
    state.PauseTiming();
    lorafall::Simulation sim(desk(100, 1.0));
    sim.inject_failure(1.0);
    state.ResumeTiming();
    for (int i = 0; i < 10; ++i) benchmark::DoNotOptimize(sim.step());
  }
}
BENCHMARK(BM_Step);

void BM_Allocate(benchmark::State& state) {
  lorafall::ScenarioConfig cfg;
  for (auto _ : state) {
    state.PauseTiming();
    std::vector<lorafall::ServerState> servers;
    for (int s = 0; s < cfg.n_servers; ++s) {
      lorafall::ServerState sv;
      sv.id = s;
      sv.mem_capacity_mb = cfg.mem_initial;
      sv.slots = cfg.slots_per_server;
      sv.energy_provision = cfg.k_apps * cfg.energy_per_app;
      sv.initial_energy = cfg.slots_per_server * cfg.energy_per_app;
      servers.push_back(sv);
    }
    std::vector<lorafall::Application> apps(64);
    std::vector<lorafall::Application*> pool;
    for (int i = 0; i < 64; ++i) {
      apps[static_cast<std::size_t>(i)].id = i;
      apps[static_cast<std::size_t>(i)].mem_demand_mb = 1 + i % 10;
      apps[static_cast<std::size_t>(i)].energy_budget = 0.03;
      pool.push_back(&apps[static_cast<std::size_t>(i)]);
    }
    std::vector<lorafall::ServerRestorationRaw> raws(servers.size());
    state.ResumeTiming();
    auto res = lorafall::allocate(pool, servers, raws, {}, cfg);
    benchmark::DoNotOptimize(res.placements.size());
  }
}
BENCHMARK(BM_Allocate);

void BM_Sweep(benchmark::State& state) {
  lorafall::ScenarioConfig base;
  for (auto _ : state) {
    auto sweep = lorafall::run_sweep(base);
    benchmark::DoNotOptimize(sweep.cells.size());
  }
}
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
