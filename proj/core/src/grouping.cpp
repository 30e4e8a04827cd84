#include "trackrec/grouping.hpp"

#include <algorithm>
#include <unordered_set>

#include "trackrec/error.hpp"

namespace trackrec {

std::string_view to_string(Feature feature) {
  switch (feature) {
    case Feature::kGender: return "gender";
    case Feature::kTotalPlaycount: return "total_playcount";
    case Feature::kDistinctTrackCount: return "distinct_track_count";
  }
  return "gender";
}

Feature parse_feature(std::string_view name) {
  if (name == "gender") return Feature::kGender;
  if (name == "total_playcount" || name == "playcount") return Feature::kTotalPlaycount;
  if (name == "distinct_track_count" || name == "track_count") {
    return Feature::kDistinctTrackCount;
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown grouping feature '" + std::string(name) + "'");
}

std::uint32_t GroupDimension::bucket_count() const {
  if (feature == Feature::kGender) return 4;
  return static_cast<std::uint32_t>(boundaries.size() + 1);
}

GroupingConfig GroupingConfig::defaults() {
  return GroupingConfig{{
      {"gender", Feature::kGender, {}},
      {"playcount", Feature::kTotalPlaycount, {10, 100, 1000}},
      {"track_count", Feature::kDistinctTrackCount, {100, 1000}},
  }};
}

void GroupingConfig::validate() const {
  if (dimensions.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "grouping needs at least one dimension");
  }
  std::unordered_set<std::string> seen;
  for (const auto& dim : dimensions) {
    if (dim.name.empty()) throw Error(ErrorCode::kInvalidConfig, "dimension name is empty");
    if (!seen.insert(dim.name).second) {
      throw Error(ErrorCode::kInvalidConfig, "duplicate dimension '" + dim.name + "'");
    }
    if (dim.feature == Feature::kGender) {
      if (!dim.boundaries.empty()) {
        throw Error(ErrorCode::kInvalidConfig, "gender dimension '" + dim.name +
                                                   "' cannot have boundaries");
      }
      continue;
    }
    for (std::size_t i = 0; i < dim.boundaries.size(); ++i) {
      if (dim.boundaries[i] == 0 || (i > 0 && dim.boundaries[i] <= dim.boundaries[i - 1])) {
        throw Error(ErrorCode::kInvalidConfig, "boundaries of '" + dim.name +
                                                   "' must be positive and strictly increasing");
      }
    }
  }
}

std::string to_string(const SubgroupKey& key) {
  return key.dimension + "_" + std::to_string(key.bucket);
}

std::uint32_t bucket_of(std::uint64_t value, const std::vector<std::uint64_t>& boundaries) {
  // Number of edges <= value.
  return static_cast<std::uint32_t>(
      std::upper_bound(boundaries.begin(), boundaries.end(), value) - boundaries.begin());
}

SubgroupKey assign(const UserProfile& profile, const GroupDimension& dimension) {
  switch (dimension.feature) {
    case Feature::kGender:
      return {dimension.name, static_cast<std::uint32_t>(profile.gender)};
    case Feature::kTotalPlaycount:
      return {dimension.name, bucket_of(profile.total_playcount, dimension.boundaries)};
    case Feature::kDistinctTrackCount:
      return {dimension.name, bucket_of(profile.distinct_track_count, dimension.boundaries)};
  }
  return {dimension.name, 0};
}

Partition partition(const ProfileMap& profiles, const GroupingConfig& config) {
  Partition groups;
  for (const auto& [user, profile] : profiles) {
    for (const auto& dim : config.dimensions) groups[assign(profile, dim)].insert(user);
  }
  return groups;
}

}  // namespace trackrec
