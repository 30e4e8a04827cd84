#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "trackrec/grouping.hpp"
#include "trackrec/vocab.hpp"

namespace trackrec {

enum class TrainMode : std::uint8_t { kCbow = 0, kSkipGram = 1 };

std::string_view to_string(TrainMode mode);
TrainMode parse_train_mode(std::string_view name);

struct TrainParams {
  std::uint32_t dim = 100;
  std::uint32_t window = 60;
  std::uint64_t min_count = 0;
  std::uint32_t negatives = 5;
  std::uint32_t epochs = 10;
  std::int64_t seed = 27;
  TrainMode mode = TrainMode::kSkipGram;
  double initial_lr = 0.025;
  double min_lr = 0.0001;
  // Values above 1 enable lock-free shared updates; results are then no
  // longer reproducible.
  std::uint32_t threads = 1;

  void validate() const;
  bool operator==(const TrainParams&) const = default;
};

// Input vectors are the track embeddings; output vectors are the context
// weights of the negative-sampling objective. Both are row-major V x dim.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;

  // Input rows uniform in [-0.5/dim, 0.5/dim) drawn from params.seed, output
  // rows zero.
  EmbeddingModel(Vocab vocab, TrainParams params, SubgroupKey subgroup = {});

  // Takes ownership of already trained matrices.
  EmbeddingModel(Vocab vocab, TrainParams params, SubgroupKey subgroup,
                 std::vector<float> input, std::vector<float> output);

  const Vocab& vocab() const { return vocab_; }
  const TrainParams& params() const { return params_; }
  const SubgroupKey& subgroup() const { return subgroup_; }
  std::size_t size() const { return vocab_.size(); }
  std::size_t dim() const { return params_.dim; }

  std::span<const float> input_row(std::uint32_t index) const {
    return {input_.data() + std::size_t{index} * dim(), dim()};
  }
  std::span<float> input_row(std::uint32_t index) {
    return {input_.data() + std::size_t{index} * dim(), dim()};
  }
  std::span<const float> output_row(std::uint32_t index) const {
    return {output_.data() + std::size_t{index} * dim(), dim()};
  }
  std::span<float> output_row(std::uint32_t index) {
    return {output_.data() + std::size_t{index} * dim(), dim()};
  }

  const std::vector<float>& input_matrix() const { return input_; }
  const std::vector<float>& output_matrix() const { return output_; }
  std::vector<float>& input_matrix() { return input_; }
  std::vector<float>& output_matrix() { return output_; }

  bool all_finite() const;

  bool operator==(const EmbeddingModel&) const = default;

 private:
  Vocab vocab_;
  TrainParams params_;
  SubgroupKey subgroup_;
  std::vector<float> input_;
  std::vector<float> output_;
};

// Builds the vocabulary and runs SGD over the negative-sampling objective.
// Learning rate decays linearly from initial_lr to min_lr across
// epochs x corpus tokens; each position samples its window uniformly from
// 1..window. Sentences with fewer than two in-vocabulary tokens are skipped.
EmbeddingModel train(std::span<const Sentence> sentences, const TrainParams& params,
                     SubgroupKey subgroup = {});

// Objective for one training example. SkipGram scores every context token
// (label 1) and each negative (label 0) against the center's input vector;
// CBOW scores the center and negatives against the mean of the context input
// vectors. Loss is the summed binary logistic loss.
struct LossGradient {
  double loss = 0.0;
  std::map<std::uint32_t, std::vector<double>> input;   // d loss / d input row
  std::map<std::uint32_t, std::vector<double>> output;  // d loss / d output row
};

LossGradient loss_and_gradient(const EmbeddingModel& model, TrainMode mode,
                               std::uint32_t center, std::span<const std::uint32_t> context,
                               std::span<const std::uint32_t> negatives);

// One SGD step on the same objective with learning rate `lr`; this is the
// update the trainer applies per example.
void apply_sgd_step(EmbeddingModel& model, TrainMode mode, std::uint32_t center,
                    std::span<const std::uint32_t> context,
                    std::span<const std::uint32_t> negatives, float lr);

double cosine(std::span<const float> a, std::span<const float> b);

}  // namespace trackrec
