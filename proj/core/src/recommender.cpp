#include "trackrec/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <unordered_set>

#include "trackrec/error.hpp"

namespace trackrec {

std::string_view to_string(ListSource source) {
  switch (source) {
    case ListSource::kModel: return "model";
    case ListSource::kFallback: return "fallback";
    case ListSource::kEnsemble: return "ensemble";
  }
  return "model";
}

std::vector<std::string> RankedList::track_ids() const {
  std::vector<std::string> ids;
  ids.reserve(entries.size());
  for (const auto& e : entries) ids.push_back(e.track_id);
  return ids;
}

PopularityIndex build_popularity(std::span<const Interaction> train, const Catalog& catalog) {
  std::vector<std::uint64_t> plays(catalog.size(), 0);
  for (const auto& event : train) {
    if (auto index = catalog.find(event.track_id)) plays[*index] += event.playcount;
  }
  std::vector<std::uint32_t> order(catalog.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return plays[a] > plays[b]; });
  std::vector<std::string> ids;
  ids.reserve(order.size());
  for (auto index : order) ids.push_back(catalog.track_id(index));
  return PopularityIndex(std::move(ids));
}

PopularityIndex build_popularity(const Dataset& dataset) {
  if (dataset.interactions.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "cannot rank popularity without interactions");
  }
  return build_popularity(dataset.interactions, dataset.catalog);
}

std::optional<std::vector<double>> user_vector(std::span<const std::string> history,
                                               const EmbeddingModel& model) {
  std::vector<double> sum(model.dim(), 0.0);
  std::size_t found = 0;
  for (const auto& track : history) {
    auto index = model.vocab().find(track);
    if (!index) continue;
    auto row = model.input_row(*index);
    for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += row[d];
    ++found;
  }
  if (found == 0) return std::nullopt;
  for (auto& v : sum) v /= static_cast<double>(found);
  return sum;
}

RankedList fallback_list(std::string_view user_id, std::span<const std::string> history,
                         const PopularityIndex& popularity, std::size_t k,
                         bool exclude_history) {
  std::unordered_set<std::string_view> seen;
  if (exclude_history) seen.insert(history.begin(), history.end());
  RankedList list;
  list.user_id = user_id;
  list.source = ListSource::kFallback;
  for (const auto& track : popularity.order()) {
    if (list.entries.size() >= k) break;
    if (seen.contains(track)) continue;
    list.entries.push_back({track, 1.0 / static_cast<double>(list.entries.size() + 1)});
  }
  return list;
}

Recommender::Recommender(const EmbeddingModel& model, const PopularityIndex& popularity)
    : model_(&model), popularity_(&popularity), inverse_norms_(model.size(), 0.0) {
  for (std::uint32_t i = 0; i < model.size(); ++i) {
    double sq = 0.0;
    for (float v : model.input_row(i)) sq += double{v} * v;
    inverse_norms_[i] = sq > 0.0 ? 1.0 / std::sqrt(sq) : 0.0;
  }
}

RankedList Recommender::recommend(std::string_view user_id, std::span<const std::string> history,
                                  std::size_t k, bool exclude_history) const {
  const auto query = user_vector(history, *model_);
  if (!query) return fallback_list(user_id, history, *popularity_, k, exclude_history);

  double query_sq = 0.0;
  for (double v : *query) query_sq += v * v;
  const double query_inv = query_sq > 0.0 ? 1.0 / std::sqrt(query_sq) : 0.0;

  std::vector<bool> excluded;
  if (exclude_history) {
    excluded.assign(model_->size(), false);
    for (const auto& track : history) {
      if (auto index = model_->vocab().find(track)) excluded[*index] = true;
    }
  }

  struct Candidate {
    double score;
    std::uint32_t index;
  };
  // a ranks ahead of b
  auto ahead = [](const Candidate& a, const Candidate& b) {
    return a.score > b.score || (a.score == b.score && a.index < b.index);
  };
  // Heap of the current best k with the weakest candidate at the front.
  std::vector<Candidate> heap;
  heap.reserve(k + 1);
  const std::size_t dim = model_->dim();
  const float* matrix = model_->input_matrix().data();
  const double* q = query->data();
  for (std::uint32_t i = 0; i < model_->size(); ++i) {
    if (exclude_history && excluded[i]) continue;
    const float* row = matrix + std::size_t{i} * dim;
    double dot = 0.0;
    for (std::size_t d = 0; d < dim; ++d) dot += q[d] * row[d];
    const Candidate candidate{dot * inverse_norms_[i] * query_inv, i};
    if (heap.size() < k) {
      heap.push_back(candidate);
      std::push_heap(heap.begin(), heap.end(), ahead);
    } else if (k > 0 && ahead(candidate, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), ahead);
      heap.back() = candidate;
      std::push_heap(heap.begin(), heap.end(), ahead);
    }
  }
  std::sort(heap.begin(), heap.end(), ahead);

  RankedList list;
  list.user_id = user_id;
  list.source = ListSource::kModel;
  list.subgroup = model_->subgroup();
  list.entries.reserve(heap.size());
  for (const auto& c : heap) list.entries.push_back({model_->vocab().token(c.index), c.score});
  return list;
}

void write_recommendations_header(std::ostream& out) {
  out << "user_id,rank,track_id,score,source\n";
}

void write_recommendations(std::ostream& out, const RankedList& list) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(9);
  for (std::size_t i = 0; i < list.entries.size(); ++i) {
    const auto& e = list.entries[i];
    out << list.user_id << ',' << (i + 1) << ',' << e.track_id << ',' << e.score << ','
        << to_string(list.source) << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace trackrec
