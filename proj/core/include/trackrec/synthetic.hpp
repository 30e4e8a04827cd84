#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "trackrec/dataset.hpp"

namespace trackrec {

// Planted-cluster listening data: tracks are split into disjoint clusters and
// every user listens only within one cluster.
struct SyntheticSpec {
  std::uint32_t clusters = 2;
  std::uint32_t tracks_per_cluster = 50;
  std::uint32_t users = 400;
  // Per-user event counts are uniform in [mean/2, 3*mean/2].
  std::uint32_t mean_events = 30;
  // Per-event playcount is uniform in [1, max_playcount].
  std::uint32_t max_playcount = 3;
  // Zipf exponent of track popularity inside a cluster (0 = uniform).
  double popularity_skew = 0.3;
  // Share of users left out of the metadata file (gender Unknown).
  double unknown_gender_share = 0.0;
  std::int64_t seed = 27;
};

struct SyntheticData {
  std::vector<Interaction> events;
  UserMetaMap user_meta;
  std::map<std::string, std::uint32_t> user_cluster;
  std::map<std::string, std::uint32_t> track_cluster;
};

SyntheticData generate_synthetic(const SyntheticSpec& spec);

void write_events_csv(std::ostream& out, std::span<const Interaction> events);
void write_user_meta_csv(std::ostream& out, const UserMetaMap& meta);

// Writes events.csv and users.csv into `dir`.
void write_synthetic(const std::filesystem::path& dir, const SyntheticData& data);

}  // namespace trackrec
