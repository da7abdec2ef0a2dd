// Micro benchmarks for the hot paths: QUBO assembly, annealing sweeps,
// program simulation, exact search and LP export.
#include <benchmark/benchmark.h>

#include "trsp/annealer.hpp"
#include "trsp/exact.hpp"
#include "trsp/mip.hpp"
#include "trsp/qubo.hpp"

namespace trsp {
namespace {

Instance bench_instance(int n, int k) {
  return generate_instance(Group{n, k}, 42);
}

void BM_BuildQubo(benchmark::State& state) {
  const Instance inst = bench_instance(static_cast<int>(state.range(0)), 2);
  const Weights w = profile_weights(RhoProfile::kLeap, inst);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_qubo(inst, w));
  }
  state.counters["variables"] = static_cast<double>(qubo_variable_count(inst));
}
BENCHMARK(BM_BuildQubo)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_AnnealSweeps(benchmark::State& state) {
  const Instance inst = bench_instance(static_cast<int>(state.range(0)), 2);
  const QuboProblem q = build_qubo(inst, profile_weights(RhoProfile::kAuto, inst));
  AnnealConfig c;
  c.steps = 10'000;
  c.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(anneal(q, c));
  }
  state.SetItemsProcessed(state.iterations() * c.steps);
  state.counters["variables"] = static_cast<double>(q.size());
}
BENCHMARK(BM_AnnealSweeps)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Realize(benchmark::State& state) {
  const Instance inst = bench_instance(static_cast<int>(state.range(0)), 3);
  const Schedule seq = sequential_schedule(inst);
  const std::vector<SampleStarts> starts = starts_of(seq, inst.num_samples());
  const int horizon = time_horizon(inst);
  for (auto _ : state) {
    benchmark::DoNotOptimize(realize(inst, starts, horizon));
  }
}
BENCHMARK(BM_Realize)->Arg(3)->Arg(9);

void BM_BranchAndBound(benchmark::State& state) {
  const Instance inst = bench_instance(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(branch_and_bound(inst));
  }
}
BENCHMARK(BM_BranchAndBound)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_WriteLp(benchmark::State& state) {
  const Instance inst = bench_instance(3, 2);
  const LinearModel m = state.range(0) == 0 ? build_sequence_model(inst) : build_time_indexed_model(inst);
  for (auto _ : state) {
    benchmark::DoNotOptimize(write_lp(m));
  }
}
BENCHMARK(BM_WriteLp)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace trsp

BENCHMARK_MAIN();
