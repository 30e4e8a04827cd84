#pragma once

#include <cstddef>
#include <span>

#include "trackrec/recommender.hpp"

namespace trackrec {

// Rank fusion across per-dimension lists, given in configured dimension
// order. Candidates sort by
//   1. number of lists containing them, descending
//   2. best (minimum) 1-based rank across those lists, ascending
//   3. position of the first list achieving that rank, ascending
//   4. track_id, ascending
// and the first k are returned with scores 1/rank. Only positions matter;
// input scores are ignored. Throws Error(kEmptyInput) for no lists.
RankedList vote(std::span<const RankedList> lists, std::size_t k);

}  // namespace trackrec
