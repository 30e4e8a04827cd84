#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "trackrec/dataset.hpp"

namespace trackrec {

enum class Feature : std::uint8_t { kGender, kTotalPlaycount, kDistinctTrackCount };

std::string_view to_string(Feature feature);
Feature parse_feature(std::string_view name);

// One partitioning axis. Numeric features use strictly increasing lower
// bucket edges; a value equal to an edge falls into the bucket above it.
struct GroupDimension {
  std::string name;
  Feature feature = Feature::kGender;
  std::vector<std::uint64_t> boundaries;

  std::uint32_t bucket_count() const;
  bool operator==(const GroupDimension&) const = default;
};

struct GroupingConfig {
  std::vector<GroupDimension> dimensions;

  // gender (m/f/n/unknown), playcount [10,100,1000], track_count [100,1000].
  static GroupingConfig defaults();

  // Throws Error(kInvalidConfig) on an empty list, duplicate names,
  // non-increasing boundaries or boundaries on the gender feature.
  void validate() const;

  bool operator==(const GroupingConfig&) const = default;
};

struct SubgroupKey {
  std::string dimension;
  std::uint32_t bucket = 0;

  auto operator<=>(const SubgroupKey&) const = default;
  bool operator==(const SubgroupKey&) const = default;
};

std::string to_string(const SubgroupKey& key);

std::uint32_t bucket_of(std::uint64_t value, const std::vector<std::uint64_t>& boundaries);

SubgroupKey assign(const UserProfile& profile, const GroupDimension& dimension);

using Partition = std::map<SubgroupKey, std::set<std::string>>;

// Only non-empty sub-groups appear in the result.
Partition partition(const ProfileMap& profiles, const GroupingConfig& config);

}  // namespace trackrec
