// Serial reference vs the OpenMP debias kernel, and the replicated harness
// at several worker counts.

#include <vector>

#include <benchmark/benchmark.h>
#include <omp.h>

#include "bandit_debias/debias.hpp"
#include "bandit_debias/harness.hpp"
#include "bandit_debias/simulator.hpp"

namespace {

using namespace bdb;

const std::vector<RewardDistribution>& arms() {
  static const std::vector<RewardDistribution> a{RewardDistribution::gaussian(1.0, 1.0),
                                                 RewardDistribution::gaussian(1.5, 1.0)};
  return a;
}

BanditLog make_log(const PolicySpec& policy) { return run_experiment(2, 100, policy, arms(), 42); }

PolicySpec policy_for(int which) {
  switch (which) {
    case 0: return EtcSpec{10};
    case 1: return UcbSpec{};
    case 2: return TsSpec{};
    default: return EgSpec{0.05};
  }
}

const char* policy_label(int which) {
  static const char* names[] = {"etc", "ucb", "ts", "eg"};
  return names[which];
}

void BM_DebiasSerial(benchmark::State& state) {
  const auto log = make_log(policy_for(static_cast<int>(state.range(0))));
  const BootstrapSpec spec{BootstrapKind::MultiplierGaussian, 1000};
  for (auto _ : state) benchmark::DoNotOptimize(reference::debias_serial(log, spec, 7));
  state.SetLabel(policy_label(static_cast<int>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * 1000);
}

void BM_DebiasKernel(benchmark::State& state) {
  const auto log = make_log(policy_for(static_cast<int>(state.range(0))));
  const BootstrapSpec spec{BootstrapKind::MultiplierGaussian, 1000};
  const int workers = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(debias(log, spec, 7, DebiasOptions{0, workers}));
  state.SetLabel(policy_label(static_cast<int>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * 1000);
}

void BM_RunCell(benchmark::State& state) {
  CellSpec cell;
  cell.name = "etc";
  cell.policy = EtcSpec{10};
  cell.arms = arms();
  cell.T = 100;
  cell.replications = 100;
  cell.bootstrap = BootstrapSpec{BootstrapKind::MultiplierGaussian, 200};
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_cell(cell, 1, workers));
  state.SetItemsProcessed(state.iterations() * 100);
}

void worker_args(benchmark::internal::Benchmark* b) {
  const int procs = omp_get_num_procs();
  for (int p = 0; p < 4; ++p) {
    for (int w = 1; w <= procs; w *= 2) b->Args({p, w});
    if ((procs & (procs - 1)) != 0) b->Args({p, procs});
  }
}

void cell_args(benchmark::internal::Benchmark* b) {
  const int procs = omp_get_num_procs();
  for (int w = 1; w <= procs; w *= 2) b->Arg(w);
  if ((procs & (procs - 1)) != 0) b->Arg(procs);
}

}  // namespace

BENCHMARK(BM_DebiasSerial)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DebiasKernel)->Apply(worker_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RunCell)->Apply(cell_args)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
