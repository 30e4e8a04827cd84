#include <benchmark/benchmark.h>

#include "trackrec/recommender.hpp"
#include "trackrec/rng.hpp"

namespace {

using namespace trackrec;

// Random unit-scale model; scoring cost does not depend on training.
EmbeddingModel random_model(std::uint32_t vocab_size, std::uint32_t dim) {
  std::vector<std::string> tokens;
  for (std::uint32_t i = 0; i < vocab_size; ++i) tokens.push_back("t" + std::to_string(i));
  TrainParams params;
  params.dim = dim;
  Rng rng(5);
  std::vector<float> input(std::size_t{vocab_size} * dim);
  for (auto& v : input) v = static_cast<float>(rng.unit() - 0.5);
  std::vector<float> output(input.size(), 0.0f);
  return EmbeddingModel(Vocab::from_entries(tokens, std::vector<std::uint64_t>(vocab_size, 1)),
                        params, {}, std::move(input), std::move(output));
}

void BM_RecommendTopK(benchmark::State& state) {
  const auto vocab_size = static_cast<std::uint32_t>(state.range(0));
  const auto model = random_model(vocab_size, 100);
  PopularityIndex popularity(model.vocab().tokens());
  const Recommender recommender(model, popularity);
  std::vector<std::string> history;
  for (std::uint32_t i = 0; i < 50; ++i) history.push_back("t" + std::to_string(i * 7 % vocab_size));
  for (auto _ : state) {
    benchmark::DoNotOptimize(recommender.recommend("u", history, 100, true));
  }
  state.SetItemsProcessed(state.iterations() * vocab_size);
}
BENCHMARK(BM_RecommendTopK)->Arg(1000)->Arg(10000)->Arg(100000);

}  // namespace
