#include <benchmark/benchmark.h>

#include "trackrec/ensemble.hpp"
#include "trackrec/metrics.hpp"
#include "trackrec/rng.hpp"

namespace {

using namespace trackrec;

void BM_Vote(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  std::vector<RankedList> lists(3);
  for (auto& list : lists) {
    for (std::size_t r = 0; r < k; ++r) {
      list.entries.push_back({"t" + std::to_string(rng.below(3 * k)), 1.0 / (r + 1.0)});
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(vote(lists, k));
}
BENCHMARK(BM_Vote)->Arg(10)->Arg(100);

void BM_MrItf(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  std::vector<EvalInstance> xs(n);
  for (auto& x : xs) {
    x.ground_truth = "t" + std::to_string(rng.below(1000));
    for (int r = 0; r < 100; ++r) x.predictions.push_back("t" + std::to_string(rng.below(1000)));
  }
  for (auto _ : state) benchmark::DoNotOptimize(mr_itf(xs, 100));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_MrItf)->Arg(1000)->Arg(10000);

}  // namespace
BENCHMARK_MAIN();
