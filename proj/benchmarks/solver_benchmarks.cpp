#include <benchmark/benchmark.h>

#include "mmnetloc/baseline_bb.hpp"
#include "mmnetloc/bench.hpp"
#include "mmnetloc/cost.hpp"
#include "mmnetloc/graph.hpp"
#include "mmnetloc/init.hpp"
#include "mmnetloc/mm.hpp"
#include "mmnetloc/node_sim.hpp"

namespace {

using namespace mmnetloc;

struct Instance {
  Network net;
  Measurements meas;
  Eigen::VectorXd x0;
};

Instance make_instance(int n) {
  NetworkConfig cfg;
  cfg.n = n;
  Instance inst;
  inst.net = build_network(cfg, 7);
  inst.meas = generate_measurements(inst.net, 0.01, 7);
  inst.x0 = init_perturbed_truth(inst.net, 0.1, 7);
  return inst;
}

void BM_cost_z(benchmark::State& state) {
  const Instance inst = make_instance(static_cast<int>(state.range(0)));
  const StateZ z = reduce_to_x(inst.net, inst.meas, inst.x0);
  for (auto _ : state)
    benchmark::DoNotOptimize(cost_z(inst.net, inst.meas, z));
}
BENCHMARK(BM_cost_z)->Arg(50)->Arg(200);

void BM_grad_z(benchmark::State& state) {
  const Instance inst = make_instance(static_cast<int>(state.range(0)));
  const StateZ z = reduce_to_x(inst.net, inst.meas, inst.x0);
  for (auto _ : state)
    benchmark::DoNotOptimize(grad_z(inst.net, inst.meas, z));
}
BENCHMARK(BM_grad_z)->Arg(50)->Arg(200);

void BM_mm_step(benchmark::State& state) {
  const Instance inst = make_instance(static_cast<int>(state.range(0)));
  const double L = lipschitz_bound(inst.net);
  StateZ z = reduce_to_x(inst.net, inst.meas, inst.x0);
  for (auto _ : state) {
    z = mm_step(inst.net, inst.meas, z, L);
    benchmark::DoNotOptimize(z.x.data());
  }
}
BENCHMARK(BM_mm_step)->Arg(50)->Arg(200);

void BM_sim_round(benchmark::State& state) {
  const Instance inst = make_instance(static_cast<int>(state.range(0)));
  NodeSimulator sim(inst.net, inst.meas, inst.x0, SolverConfig{});
  for (auto _ : state) sim.run_round();
}
BENCHMARK(BM_sim_round)->Arg(50)->Arg(200);

void BM_grad_original(benchmark::State& state) {
  const Instance inst = make_instance(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(grad_original(inst.net, inst.meas, inst.x0));
}
BENCHMARK(BM_grad_original)->Arg(50)->Arg(200);

void BM_bb_iteration(benchmark::State& state) {
  const Instance inst = make_instance(50);
  BBConfig cfg;
  cfg.max_iters = static_cast<int>(state.range(0));
  for (auto _ : state) {
    BBResult r = bb_solve(inst.net, inst.meas, inst.x0, cfg);
    benchmark::DoNotOptimize(r.x_hat.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_bb_iteration)->Arg(20);

void BM_solve_full(benchmark::State& state) {
  const Instance inst = make_instance(50);
  SolverConfig cfg;
  cfg.max_iters = static_cast<int>(state.range(0));
  for (auto _ : state) {
    SolveResult r = solve(inst.net, inst.meas, inst.x0, cfg);
    benchmark::DoNotOptimize(r.x_hat.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_solve_full)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
