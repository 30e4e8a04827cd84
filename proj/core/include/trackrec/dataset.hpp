#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace trackrec {

// One listening event.
struct Interaction {
  std::string user_id;
  std::string track_id;
  std::int64_t timestamp = 0;
  std::uint64_t playcount = 1;

  bool operator==(const Interaction&) const = default;
};

enum class Gender : std::uint8_t { kMale = 0, kFemale = 1, kNeutral = 2, kUnknown = 3 };

std::string_view to_string(Gender gender);
// "m"/"f"/"n" (case-insensitive) map to Male/Female/Neutral; anything else is Unknown.
Gender parse_gender(std::string_view token);

struct UserProfile {
  std::string user_id;
  Gender gender = Gender::kUnknown;
  std::uint64_t total_playcount = 0;
  std::uint64_t distinct_track_count = 0;

  bool operator==(const UserProfile&) const = default;
};

using ProfileMap = std::map<std::string, UserProfile>;

// Dense track_id -> index mapping, indices assigned in first-appearance order.
class Catalog {
 public:
  // Returns the existing index or appends a new one.
  std::uint32_t intern(std::string_view track_id);
  std::optional<std::uint32_t> find(std::string_view track_id) const;
  const std::string& track_id(std::uint32_t index) const { return ids_.at(index); }
  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

struct Dataset {
  std::vector<Interaction> interactions;  // input order preserved
  ProfileMap profiles;
  Catalog catalog;
  std::size_t malformed_count = 0;
};

// Metadata row as read from the user metadata CSV.
struct UserMeta {
  Gender gender = Gender::kUnknown;
  std::optional<std::uint64_t> playcount;
};

using UserMetaMap = std::map<std::string, UserMeta>;

// Events CSV: header with user_id,track_id,timestamp and optional playcount.
// Column order is free and extra columns are ignored. Rows that fail to parse
// are skipped and counted in malformed_count.
Dataset load_events(const std::filesystem::path& path);
Dataset load_events(std::istream& in);

UserMetaMap load_user_meta(const std::filesystem::path& path);
UserMetaMap load_user_meta(std::istream& in);

// Profiles for every user present in `interactions`. Metadata gender and
// playcount take precedence over derived values; distinct_track_count is
// always derived.
ProfileMap derive_profiles(std::span<const Interaction> interactions,
                           const UserMetaMap* user_meta = nullptr);

// Listening sequences keyed by user: track_ids sorted by timestamp, ties in
// input order.
std::map<std::string, std::vector<std::string>> user_histories(
    std::span<const Interaction> interactions);

struct FoldSplit {
  int fold_index = 0;
  std::vector<Interaction> train;
  // Exactly one held-out event per eligible user, ordered by user_id.
  std::vector<Interaction> held_out;

  bool operator==(const FoldSplit&) const = default;
};

// Leave-one-out resampling: every user with at least two interactions has one
// event drawn uniformly (seed = base_seed + fold_index) and held out.
FoldSplit bootstrap_fold(const Dataset& dataset, int fold_index, std::int64_t base_seed);

// FNV-1a over the interaction stream; used to tag persisted models.
std::uint64_t corpus_checksum(std::span<const Interaction> interactions);

}  // namespace trackrec
