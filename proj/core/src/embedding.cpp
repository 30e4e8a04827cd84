#include "trackrec/embedding.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "log.hpp"
#include "trackrec/error.hpp"
#include "trackrec/rng.hpp"

namespace trackrec {

std::string_view to_string(TrainMode mode) {
  return mode == TrainMode::kCbow ? "cbow" : "skipgram";
}

TrainMode parse_train_mode(std::string_view name) {
  if (name == "cbow") return TrainMode::kCbow;
  if (name == "skipgram" || name == "skip-gram" || name == "sg") return TrainMode::kSkipGram;
  throw Error(ErrorCode::kInvalidConfig, "unknown training mode '" + std::string(name) + "'");
}

void TrainParams::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidConfig, what); };
  if (dim == 0) fail("dim must be >= 1");
  if (window == 0) fail("window must be >= 1");
  if (negatives == 0) fail("negatives must be >= 1");
  if (!(initial_lr > 0.0)) fail("initial_lr must be positive");
  if (!(min_lr >= 0.0) || min_lr > initial_lr) fail("min_lr must lie in [0, initial_lr]");
  if (threads == 0) fail("threads must be >= 1");
}

EmbeddingModel::EmbeddingModel(Vocab vocab, TrainParams params, SubgroupKey subgroup)
    : vocab_(std::move(vocab)), params_(params), subgroup_(std::move(subgroup)) {
  const std::size_t cells = vocab_.size() * params_.dim;
  input_.resize(cells);
  output_.assign(cells, 0.0f);
  Rng rng(static_cast<std::uint64_t>(params_.seed));
  const double scale = 1.0 / static_cast<double>(params_.dim);
  for (auto& value : input_) value = static_cast<float>((rng.unit() - 0.5) * scale);
}

EmbeddingModel::EmbeddingModel(Vocab vocab, TrainParams params, SubgroupKey subgroup,
                               std::vector<float> input, std::vector<float> output)
    : vocab_(std::move(vocab)),
      params_(params),
      subgroup_(std::move(subgroup)),
      input_(std::move(input)),
      output_(std::move(output)) {
  const std::size_t cells = vocab_.size() * params_.dim;
  if (input_.size() != cells || output_.size() != cells) {
    throw Error(ErrorCode::kModelFileCorrupt, "matrix size does not match vocab x dim");
  }
}

bool EmbeddingModel::all_finite() const {
  auto finite = [](float v) { return std::isfinite(v); };
  return std::all_of(input_.begin(), input_.end(), finite) &&
         std::all_of(output_.begin(), output_.end(), finite);
}

double cosine(std::span<const float> a, std::span<const float> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += double{a[i]} * b[i];
    na += double{a[i]} * a[i];
    nb += double{b[i]} * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline float sigmoidf(float x) { return 1.0f / (1.0f + std::exp(-x)); }

void check_index(const EmbeddingModel& model, std::uint32_t index) {
  if (index >= model.size()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "index " + std::to_string(index) + " outside vocab of " +
                    std::to_string(model.size()));
  }
}

// Scores `targets` (first `positives` are label 1, the rest label 0) against
// hidden vector h, updating output rows in place and accumulating the hidden
// gradient step into grad_h. Output rows are read before they are written so
// distinct targets see the pre-step parameters.
inline void update_targets(float* output, std::size_t dim, const float* h, float* grad_h,
                           const std::uint32_t* targets, std::size_t count,
                           std::size_t positives, float lr) {
  for (std::size_t t = 0; t < count; ++t) {
    float* row = output + std::size_t{targets[t]} * dim;
    float f = 0.0f;
    for (std::size_t d = 0; d < dim; ++d) f += h[d] * row[d];
    const float label = t < positives ? 1.0f : 0.0f;
    const float g = (label - sigmoidf(f)) * lr;
    for (std::size_t d = 0; d < dim; ++d) {
      grad_h[d] += g * row[d];
      row[d] += g * h[d];
    }
  }
}

// One example. For skip-gram `context` has exactly one token here.
struct StepScratch {
  std::vector<float> h;
  std::vector<float> grad_h;
  std::vector<std::uint32_t> targets;
};

void skipgram_step(float* input, float* output, std::size_t dim, std::uint32_t center,
                   std::uint32_t context, std::span<const std::uint32_t> negatives, float lr,
                   StepScratch& scratch) {
  scratch.targets.clear();
  scratch.targets.push_back(context);
  scratch.targets.insert(scratch.targets.end(), negatives.begin(), negatives.end());
  float* h = input + std::size_t{center} * dim;
  std::fill(scratch.grad_h.begin(), scratch.grad_h.end(), 0.0f);
  update_targets(output, dim, h, scratch.grad_h.data(), scratch.targets.data(),
                 scratch.targets.size(), 1, lr);
  for (std::size_t d = 0; d < dim; ++d) h[d] += scratch.grad_h[d];
}

void cbow_step(float* input, float* output, std::size_t dim, std::uint32_t center,
               std::span<const std::uint32_t> context, std::span<const std::uint32_t> negatives,
               float lr, StepScratch& scratch) {
  std::fill(scratch.h.begin(), scratch.h.end(), 0.0f);
  for (auto c : context) {
    const float* row = input + std::size_t{c} * dim;
    for (std::size_t d = 0; d < dim; ++d) scratch.h[d] += row[d];
  }
  const float inv = 1.0f / static_cast<float>(context.size());
  for (auto& v : scratch.h) v *= inv;

  scratch.targets.clear();
  scratch.targets.push_back(center);
  scratch.targets.insert(scratch.targets.end(), negatives.begin(), negatives.end());
  std::fill(scratch.grad_h.begin(), scratch.grad_h.end(), 0.0f);
  update_targets(output, dim, scratch.h.data(), scratch.grad_h.data(), scratch.targets.data(),
                 scratch.targets.size(), 1, lr);
  // d h / d context row = 1/|context|.
  for (auto c : context) {
    float* row = input + std::size_t{c} * dim;
    for (std::size_t d = 0; d < dim; ++d) row[d] += scratch.grad_h[d] * inv;
  }
}

struct Corpus {
  std::vector<std::vector<std::uint32_t>> sentences;
  std::uint64_t tokens = 0;
};

Corpus encode(std::span<const Sentence> sentences, const Vocab& vocab) {
  Corpus corpus;
  for (const auto& sentence : sentences) {
    std::vector<std::uint32_t> ids;
    ids.reserve(sentence.size());
    for (const auto& token : sentence) {
      if (auto id = vocab.find(token)) ids.push_back(*id);
    }
    if (ids.size() < 2) continue;
    corpus.tokens += ids.size();
    corpus.sentences.push_back(std::move(ids));
  }
  return corpus;
}

class Trainer {
 public:
  Trainer(EmbeddingModel& model, const Corpus& corpus, const NegativeTable& table)
      : model_(model), corpus_(corpus), table_(table), params_(model.params()) {
    total_ = std::uint64_t{params_.epochs} * corpus_.tokens;
  }

  void run() {
    if (total_ == 0) return;
    if (params_.threads <= 1) {
      work(0, 1);
      return;
    }
    std::vector<std::jthread> workers;
    for (std::uint32_t t = 0; t < params_.threads; ++t) {
      workers.emplace_back([this, t] { work(t, params_.threads); });
    }
  }

 private:
  float learning_rate(std::uint64_t processed) const {
    const double progress = static_cast<double>(processed) / static_cast<double>(total_);
    const double lr = params_.initial_lr - (params_.initial_lr - params_.min_lr) * progress;
    return static_cast<float>(std::max(lr, params_.min_lr));
  }

  // Worker `id` of `stride` handles sentences id, id+stride, ...
  void work(std::uint32_t id, std::uint32_t stride) {
    const std::size_t dim = model_.dim();
    float* input = model_.input_matrix().data();
    float* output = model_.output_matrix().data();
    // Initialisation consumed the seed's stream; training uses a derived one.
    Rng rng(static_cast<std::uint64_t>(params_.seed) * 0x9E3779B97F4A7C15ULL + 1 + id);
    StepScratch scratch{std::vector<float>(dim), std::vector<float>(dim), {}};
    std::vector<std::uint32_t> negatives;
    std::vector<std::uint32_t> context;
    negatives.reserve(params_.negatives);

    for (std::uint32_t epoch = 0; epoch < params_.epochs; ++epoch) {
      for (std::size_t s = id; s < corpus_.sentences.size(); s += stride) {
        const auto& sentence = corpus_.sentences[s];
        const std::size_t n = sentence.size();
        for (std::size_t i = 0; i < n; ++i) {
          const float lr = learning_rate(processed_.fetch_add(1, std::memory_order_relaxed));
          const std::size_t reach = 1 + rng.below(params_.window);
          const std::size_t lo = i >= reach ? i - reach : 0;
          const std::size_t hi = std::min(n - 1, i + reach);
          const std::uint32_t center = sentence[i];

          if (params_.mode == TrainMode::kSkipGram) {
            for (std::size_t j = lo; j <= hi; ++j) {
              if (j == i) continue;
              draw_negatives(rng, sentence[j], negatives);
              skipgram_step(input, output, dim, center, sentence[j], negatives, lr, scratch);
            }
          } else {
            context.clear();
            for (std::size_t j = lo; j <= hi; ++j) {
              if (j != i) context.push_back(sentence[j]);
            }
            draw_negatives(rng, center, negatives);
            cbow_step(input, output, dim, center, context, negatives, lr, scratch);
          }
        }
      }
    }
  }

  // Samples equal to the positive target are dropped, as in reference Word2Vec.
  void draw_negatives(Rng& rng, std::uint32_t positive, std::vector<std::uint32_t>& out) const {
    out.clear();
    for (std::uint32_t k = 0; k < params_.negatives; ++k) {
      const auto sample = table_.sample(rng);
      if (sample != positive) out.push_back(sample);
    }
  }

  EmbeddingModel& model_;
  const Corpus& corpus_;
  const NegativeTable& table_;
  const TrainParams params_;
  std::uint64_t total_ = 0;
  std::atomic<std::uint64_t> processed_{0};
};

}  // namespace

EmbeddingModel train(std::span<const Sentence> sentences, const TrainParams& params,
                     SubgroupKey subgroup) {
  params.validate();
  auto vocab = Vocab::build(sentences, params.min_count);
  const auto corpus = encode(sentences, vocab);
  EmbeddingModel model(std::move(vocab), params, std::move(subgroup));
  if (params.epochs == 0 || corpus.tokens == 0) return model;

  const NegativeTable table(model.vocab());
  Trainer(model, corpus, table).run();
  log::debug("trained {} ({} tracks, {} tokens, {} epochs)", to_string(model.subgroup()),
             model.size(), corpus.tokens, params.epochs);
  return model;
}

LossGradient loss_and_gradient(const EmbeddingModel& model, TrainMode mode,
                               std::uint32_t center, std::span<const std::uint32_t> context,
                               std::span<const std::uint32_t> negatives) {
  check_index(model, center);
  if (context.empty()) throw Error(ErrorCode::kEmptyInput, "context is empty");
  for (auto c : context) check_index(model, c);
  for (auto n : negatives) check_index(model, n);

  const std::size_t dim = model.dim();
  LossGradient result;
  auto accumulate = [dim](std::map<std::uint32_t, std::vector<double>>& grads,
                          std::uint32_t row) -> std::vector<double>& {
    auto& g = grads[row];
    if (g.empty()) g.assign(dim, 0.0);
    return g;
  };

  // Binary logistic terms of one hidden vector against labelled targets;
  // returns d loss / d h.
  auto score = [&](const std::vector<double>& h, std::uint32_t target, double label) {
    auto row = model.output_row(target);
    double f = 0.0;
    for (std::size_t d = 0; d < dim; ++d) f += h[d] * row[d];
    const double p = sigmoid(f);
    result.loss -= label > 0.5 ? std::log(p) : std::log1p(-p);
    const double g = p - label;
    auto& go = accumulate(result.output, target);
    std::vector<double> gh(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      go[d] += g * h[d];
      gh[d] = g * row[d];
    }
    return gh;
  };

  if (mode == TrainMode::kSkipGram) {
    auto in = model.input_row(center);
    const std::vector<double> h(in.begin(), in.end());
    for (auto c : context) {
      std::vector<std::uint32_t> targets{c};
      targets.insert(targets.end(), negatives.begin(), negatives.end());
      for (std::size_t t = 0; t < targets.size(); ++t) {
        const auto gh = score(h, targets[t], t == 0 ? 1.0 : 0.0);
        auto& gc = accumulate(result.input, center);
        for (std::size_t d = 0; d < dim; ++d) gc[d] += gh[d];
      }
    }
  } else {
    std::vector<double> h(dim, 0.0);
    for (auto c : context) {
      auto row = model.input_row(c);
      for (std::size_t d = 0; d < dim; ++d) h[d] += row[d];
    }
    const double inv = 1.0 / static_cast<double>(context.size());
    for (auto& v : h) v *= inv;
    std::vector<double> grad_h(dim, 0.0);
    std::vector<std::uint32_t> targets{center};
    targets.insert(targets.end(), negatives.begin(), negatives.end());
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const auto gh = score(h, targets[t], t == 0 ? 1.0 : 0.0);
      for (std::size_t d = 0; d < dim; ++d) grad_h[d] += gh[d];
    }
    for (auto c : context) {
      auto& gc = accumulate(result.input, c);
      for (std::size_t d = 0; d < dim; ++d) gc[d] += grad_h[d] * inv;
    }
  }
  return result;
}

void apply_sgd_step(EmbeddingModel& model, TrainMode mode, std::uint32_t center,
                    std::span<const std::uint32_t> context,
                    std::span<const std::uint32_t> negatives, float lr) {
  check_index(model, center);
  if (context.empty()) throw Error(ErrorCode::kEmptyInput, "context is empty");
  for (auto c : context) check_index(model, c);
  for (auto n : negatives) check_index(model, n);

  const std::size_t dim = model.dim();
  StepScratch scratch{std::vector<float>(dim), std::vector<float>(dim), {}};
  float* input = model.input_matrix().data();
  float* output = model.output_matrix().data();
  if (mode == TrainMode::kSkipGram) {
    for (auto c : context) skipgram_step(input, output, dim, center, c, negatives, lr, scratch);
  } else {
    cbow_step(input, output, dim, center, context, negatives, lr, scratch);
  }
}

}  // namespace trackrec
