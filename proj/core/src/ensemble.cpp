#include "trackrec/ensemble.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "trackrec/error.hpp"

namespace trackrec {

RankedList vote(std::span<const RankedList> lists, std::size_t k) {
  if (lists.empty()) throw Error(ErrorCode::kEmptyInput, "nothing to vote over");

  struct Tally {
    std::string_view track;
    std::size_t votes = 0;
    std::size_t best_rank = std::numeric_limits<std::size_t>::max();
    std::size_t best_list = std::numeric_limits<std::size_t>::max();
  };
  std::vector<Tally> tallies;
  std::unordered_map<std::string_view, std::size_t> slot;
  for (std::size_t l = 0; l < lists.size(); ++l) {
    const auto& entries = lists[l].entries;
    for (std::size_t r = 0; r < entries.size(); ++r) {
      auto [it, inserted] = slot.try_emplace(entries[r].track_id, tallies.size());
      if (inserted) tallies.push_back({entries[r].track_id});
      auto& tally = tallies[it->second];
      ++tally.votes;
      const std::size_t rank = r + 1;
      // Lists are scanned in order, so the first list reaching a rank keeps it.
      if (rank < tally.best_rank) {
        tally.best_rank = rank;
        tally.best_list = l;
      }
    }
  }

  auto ahead = [](const Tally& a, const Tally& b) {
    if (a.votes != b.votes) return a.votes > b.votes;
    if (a.best_rank != b.best_rank) return a.best_rank < b.best_rank;
    if (a.best_list != b.best_list) return a.best_list < b.best_list;
    return a.track < b.track;
  };
  const std::size_t keep = std::min(k, tallies.size());
  std::partial_sort(tallies.begin(), tallies.begin() + static_cast<std::ptrdiff_t>(keep),
                    tallies.end(), ahead);

  RankedList fused;
  fused.user_id = lists.front().user_id;
  const bool all_fallback = std::all_of(lists.begin(), lists.end(), [](const RankedList& l) {
    return l.source == ListSource::kFallback;
  });
  fused.source = all_fallback ? ListSource::kFallback : ListSource::kEnsemble;
  fused.entries.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    fused.entries.push_back({std::string(tallies[i].track), 1.0 / static_cast<double>(i + 1)});
  }
  return fused;
}

}  // namespace trackrec
