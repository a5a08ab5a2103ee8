#include <benchmark/benchmark.h>

#include "kofn/encoding.hpp"
#include "kofn/measures.hpp"
#include "kofn/osss.hpp"
#include "kofn/percolation.hpp"
#include "kofn/trees.hpp"

namespace kofn {
namespace {

void BM_SampleKOutOfN(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const KOutOfN measure(n, n / 2);
  Rng rng(1);
  Configuration omega;
  std::vector<Element> scratch;
  for (auto _ : state) {
    measure.sample_into(rng, omega, scratch);
    benchmark::DoNotOptimize(omega);
  }
}
BENCHMARK(BM_SampleKOutOfN)->Arg(16)->Arg(256)->Arg(4096);

void BM_RunTreeMajority(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto event = majority(n, n - 1);
  const auto tree = random_order(n, 2);
  const KOutOfN measure(n, n / 2);
  Rng rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_tree(tree, event, measure.sample(rng)).tau);
  }
}
BENCHMARK(BM_RunTreeMajority)->Arg(12)->Arg(64);

void BM_ExactOsss(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto event = tribes(n, 3);
  const auto tree = balanced_split(n, 4);
  const KOutOfN measure(n, n / 2);
  for (auto _ : state) benchmark::DoNotOptimize(verify_osss_exact(event, tree, measure).bracket);
}
BENCHMARK(BM_ExactOsss)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_CrossingOracle(benchmark::State& state) {
  const auto R = static_cast<std::size_t>(state.range(0));
  const auto box = build_box(R);
  const KOutOfN measure(R * R, R * R / 2);
  Rng rng(5);
  const auto omega = measure.sample(rng);
  for (auto _ : state) benchmark::DoNotOptimize(has_horizontal_crossing(box, omega));
}
BENCHMARK(BM_CrossingOracle)->Arg(16)->Arg(64);

void BM_ZeroPivotalCount(benchmark::State& state) {
  const auto R = static_cast<std::size_t>(state.range(0));
  const auto box = build_box(R);
  const KOutOfN measure(R * R, R * R / 2);
  Rng rng(6);
  const auto omega = measure.sample(rng);
  for (auto _ : state) benchmark::DoNotOptimize(count_zero_pivotal(box, omega));
}
BENCHMARK(BM_ZeroPivotalCount)->Arg(16)->Arg(64);

void BM_ExplorationWalk(benchmark::State& state) {
  const auto R = static_cast<std::size_t>(state.range(0));
  const auto box = build_box(R);
  const KOutOfN measure(R * R, R * R / 2);
  Rng rng(7);
  const auto omega = measure.sample(rng);
  for (auto _ : state) benchmark::DoNotOptimize(explore(box, R / 2, omega).decision);
}
BENCHMARK(BM_ExplorationWalk)->Arg(16)->Arg(64);

void BM_ExplorationTreeRun(benchmark::State& state) {
  const auto R = static_cast<std::size_t>(state.range(0));
  const auto box = build_box(R);
  const auto event = crossing_event(box);
  const auto tree = exploration_tree(box, R / 2);
  const KOutOfN measure(R * R, R * R / 2);
  Rng rng(8);
  const auto omega = measure.sample(rng);
  for (auto _ : state) benchmark::DoNotOptimize(run_tree(tree, event, omega).tau);
}
BENCHMARK(BM_ExplorationTreeRun)->Arg(16)->Arg(32);

void BM_LognSampler(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(logn_sum_estimate(n, 1000, ParallelOptions{1, 1}).sum.mean);
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_LognSampler)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace kofn

BENCHMARK_MAIN();
