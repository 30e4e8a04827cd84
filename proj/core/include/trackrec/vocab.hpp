#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "trackrec/rng.hpp"

namespace trackrec {

using Sentence = std::vector<std::string>;

// Track vocabulary of one embedding model. Index order is descending corpus
// frequency, ties by first appearance.
class Vocab {
 public:
  Vocab() = default;

  // Throws Error(kEmptyVocab) when every token falls below min_count.
  static Vocab build(std::span<const Sentence> sentences, std::uint64_t min_count);

  // Rebuilds a vocabulary with the given order, e.g. from a model file.
  static Vocab from_entries(std::vector<std::string> tokens, std::vector<std::uint64_t> counts);

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::string& token(std::uint32_t index) const { return tokens_[index]; }
  std::uint64_t frequency(std::uint32_t index) const { return counts_[index]; }
  std::optional<std::uint32_t> find(std::string_view token) const;

  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<std::uint64_t>& frequencies() const { return counts_; }

  bool operator==(const Vocab& other) const {
    return tokens_ == other.tokens_ && counts_ == other.counts_;
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// Unigram^0.75 sampling table for negative sampling.
class NegativeTable {
 public:
  static constexpr double kPower = 0.75;
  static constexpr std::size_t kMaxSize = 10'000'000;
  static constexpr std::size_t kMinSize = 100'000;

  explicit NegativeTable(const Vocab& vocab);

  std::uint32_t sample(Rng& rng) const { return table_[rng.below(table_.size())]; }
  std::size_t size() const { return table_.size(); }
  // Fraction of table slots holding `index`.
  double mass(std::uint32_t index) const;

 private:
  std::vector<std::uint32_t> table_;
};

}  // namespace trackrec
