#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trackrec/dataset.hpp"
#include "trackrec/embedding.hpp"
#include "trackrec/grouping.hpp"

namespace trackrec {

struct ScoredTrack {
  std::string track_id;
  double score = 0.0;

  bool operator==(const ScoredTrack&) const = default;
};

enum class ListSource : std::uint8_t { kModel, kFallback, kEnsemble };

std::string_view to_string(ListSource source);

struct RankedList {
  std::string user_id;
  std::vector<ScoredTrack> entries;  // best first, scores non-increasing
  ListSource source = ListSource::kModel;
  std::optional<SubgroupKey> subgroup;  // set for kModel

  std::vector<std::string> track_ids() const;
  bool operator==(const RankedList&) const = default;
};

// Catalog tracks by descending training playcount, ties by catalog index.
class PopularityIndex {
 public:
  PopularityIndex() = default;
  explicit PopularityIndex(std::vector<std::string> order) : order_(std::move(order)) {}

  const std::vector<std::string>& order() const { return order_; }
  std::size_t size() const { return order_.size(); }

 private:
  std::vector<std::string> order_;
};

// Tracks of `catalog` absent from `train` are ranked last with playcount 0.
PopularityIndex build_popularity(std::span<const Interaction> train, const Catalog& catalog);
// Throws Error(kEmptyDataset) when the dataset has no interactions.
PopularityIndex build_popularity(const Dataset& dataset);

// Mean of the input vectors of history tracks present in the vocab, or
// nullopt when none is.
std::optional<std::vector<double>> user_vector(std::span<const std::string> history,
                                               const EmbeddingModel& model);

// Popularity top-k with scores 1/rank; optionally skipping history tracks.
RankedList fallback_list(std::string_view user_id, std::span<const std::string> history,
                         const PopularityIndex& popularity, std::size_t k,
                         bool exclude_history);

// Exact cosine top-k over one model's vocabulary. Row norms are cached at
// construction; instances are immutable and safe to share between threads.
class Recommender {
 public:
  Recommender(const EmbeddingModel& model, const PopularityIndex& popularity);

  // Ties in score go to the lower vocab index. Falls back to popularity when
  // no history track is in the vocabulary.
  RankedList recommend(std::string_view user_id, std::span<const std::string> history,
                       std::size_t k, bool exclude_history) const;

  const EmbeddingModel& model() const { return *model_; }

 private:
  const EmbeddingModel* model_;
  const PopularityIndex* popularity_;
  std::vector<double> inverse_norms_;
};

// CSV header: user_id,rank,track_id,score,source
void write_recommendations_header(std::ostream& out);
void write_recommendations(std::ostream& out, const RankedList& list);

}  // namespace trackrec
