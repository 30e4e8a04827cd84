#include "trackrec/vocab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trackrec/error.hpp"

namespace trackrec {

Vocab Vocab::build(std::span<const Sentence> sentences, std::uint64_t min_count) {
  std::unordered_map<std::string_view, std::size_t> slot;
  std::vector<std::string_view> order;
  std::vector<std::uint64_t> counts;
  for (const auto& sentence : sentences) {
    for (const auto& token : sentence) {
      auto [it, inserted] = slot.try_emplace(token, order.size());
      if (inserted) {
        order.push_back(token);
        counts.push_back(0);
      }
      ++counts[it->second];
    }
  }

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (counts[i] >= min_count) kept.push_back(i);
  }
  if (kept.empty()) throw Error(ErrorCode::kEmptyVocab, "no token reaches min_count");
  // Stable sort keeps first-appearance order among equal frequencies.
  std::stable_sort(kept.begin(), kept.end(),
                   [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });

  std::vector<std::string> tokens;
  std::vector<std::uint64_t> freqs;
  tokens.reserve(kept.size());
  freqs.reserve(kept.size());
  for (auto i : kept) {
    tokens.emplace_back(order[i]);
    freqs.push_back(counts[i]);
  }
  return from_entries(std::move(tokens), std::move(freqs));
}

Vocab Vocab::from_entries(std::vector<std::string> tokens, std::vector<std::uint64_t> counts) {
  if (tokens.size() != counts.size()) {
    throw Error(ErrorCode::kInvalidConfig, "vocab tokens and counts differ in length");
  }
  Vocab vocab;
  vocab.tokens_ = std::move(tokens);
  vocab.counts_ = std::move(counts);
  vocab.index_.reserve(vocab.tokens_.size());
  for (std::uint32_t i = 0; i < vocab.tokens_.size(); ++i) {
    if (!vocab.index_.try_emplace(vocab.tokens_[i], i).second) {
      throw Error(ErrorCode::kInvalidConfig, "duplicate vocab token '" + vocab.tokens_[i] + "'");
    }
  }
  return vocab;
}

std::optional<std::uint32_t> Vocab::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NegativeTable::NegativeTable(const Vocab& vocab) {
  if (vocab.empty()) throw Error(ErrorCode::kEmptyVocab, "negative table over empty vocab");
  const std::size_t n = vocab.size();
  const std::size_t size = std::clamp(n * 100, kMinSize, kMaxSize);

  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    weights[i] = std::pow(static_cast<double>(vocab.frequency(static_cast<std::uint32_t>(i))), kPower);
  }
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (total <= 0.0) {
    std::fill(weights.begin(), weights.end(), 1.0);
    total = static_cast<double>(n);
  }

  table_.resize(size);
  std::size_t current = 0;
  double cumulative = weights[0] / total;
  for (std::size_t slot = 0; slot < size; ++slot) {
    table_[slot] = static_cast<std::uint32_t>(current);
    if (static_cast<double>(slot + 1) / static_cast<double>(size) > cumulative && current + 1 < n) {
      ++current;
      cumulative += weights[current] / total;
    }
  }
}

double NegativeTable::mass(std::uint32_t index) const {
  const auto hits = std::count(table_.begin(), table_.end(), index);
  return static_cast<double>(hits) / static_cast<double>(table_.size());
}

}  // namespace trackrec
