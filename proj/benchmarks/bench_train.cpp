#include <benchmark/benchmark.h>

#include "trackrec/embedding.hpp"
#include "trackrec/dataset.hpp"
#include "trackrec/synthetic.hpp"

namespace {

using namespace trackrec;

void BM_TrainSynthetic(benchmark::State& state) {
  SyntheticSpec spec;
  spec.clusters = 4;
  spec.users = 200;
  const auto data = generate_synthetic(spec);
  std::vector<Sentence> corpus;
  std::size_t tokens = 0;
  for (const auto& [user, history] : user_histories(data.events)) {
    tokens += history.size();
    corpus.push_back(history);
  }
  TrainParams params;
  params.mode = state.range(0) == 0 ? TrainMode::kCbow : TrainMode::kSkipGram;
  params.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train(corpus, params));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tokens));
  state.SetLabel(state.range(0) == 0 ? "cbow" : "skipgram");
}
BENCHMARK(BM_TrainSynthetic)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
