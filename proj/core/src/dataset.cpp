#include "trackrec/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "csv.hpp"
#include "trackrec/error.hpp"
#include "log.hpp"
#include "trackrec/rng.hpp"

namespace trackrec {

std::string_view to_string(Gender gender) {
  switch (gender) {
    case Gender::kMale: return "male";
    case Gender::kFemale: return "female";
    case Gender::kNeutral: return "neutral";
    case Gender::kUnknown: return "unknown";
  }
  return "unknown";
}

Gender parse_gender(std::string_view token) {
  token = detail::trim(token);
  if (token.size() != 1) return Gender::kUnknown;
  switch (token[0]) {
    case 'm': case 'M': return Gender::kMale;
    case 'f': case 'F': return Gender::kFemale;
    case 'n': case 'N': return Gender::kNeutral;
    default: return Gender::kUnknown;
  }
}

std::uint32_t Catalog::intern(std::string_view track_id) {
  auto [it, inserted] = index_.try_emplace(std::string(track_id),
                                           static_cast<std::uint32_t>(ids_.size()));
  if (inserted) ids_.emplace_back(track_id);
  return it->second;
}

std::optional<std::uint32_t> Catalog::find(std::string_view track_id) const {
  auto it = index_.find(std::string(track_id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

template <typename T>
bool parse_integer(std::string_view text, T& out) {
  text = detail::trim(text);
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return in;
}

}  // namespace

Dataset load_events(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return load_events(in);
}

Dataset load_events(std::istream& in) {
  std::string line;
  if (!detail::read_line(in, line)) {
    throw Error(ErrorCode::kEmptyDataset, "events input has no header");
  }
  const detail::Header header(line);
  const auto user_col = header.require("user_id");
  const auto track_col = header.require("track_id");
  const auto ts_col = header.require("timestamp");
  const auto pc_col = header.find("playcount");

  Dataset dataset;
  std::vector<std::string_view> fields;
  while (detail::read_line(in, line)) {
    if (detail::trim(line).empty()) continue;
    detail::split(line, fields);
    auto field = [&](std::size_t col) -> std::string_view {
      return col < fields.size() ? detail::trim(fields[col]) : std::string_view{};
    };
    Interaction row;
    row.user_id = field(user_col);
    row.track_id = field(track_col);
    const bool ok_ids = !row.user_id.empty() && !row.track_id.empty();
    const bool ok_ts = parse_integer(field(ts_col), row.timestamp) && row.timestamp >= 0;
    bool ok_pc = true;
    if (pc_col) {
      // Absent value means a single play.
      auto text = field(*pc_col);
      if (!text.empty()) ok_pc = parse_integer(text, row.playcount);
    }
    if (!ok_ids || !ok_ts || !ok_pc) {
      ++dataset.malformed_count;
      continue;
    }
    dataset.catalog.intern(row.track_id);
    dataset.interactions.push_back(std::move(row));
  }
  if (dataset.interactions.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "no valid event rows");
  }
  if (dataset.malformed_count > 0) {
    log::warn("skipped {} malformed event rows", dataset.malformed_count);
  }
  dataset.profiles = derive_profiles(dataset.interactions);
  return dataset;
}

UserMetaMap load_user_meta(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return load_user_meta(in);
}

UserMetaMap load_user_meta(std::istream& in) {
  UserMetaMap meta;
  std::string line;
  if (!detail::read_line(in, line)) return meta;
  const detail::Header header(line);
  const auto user_col = header.require("user_id");
  const auto gender_col = header.require("gender");
  const auto pc_col = header.find("playcount");

  std::vector<std::string_view> fields;
  while (detail::read_line(in, line)) {
    detail::split(line, fields);
    if (user_col >= fields.size()) continue;
    auto user = detail::trim(fields[user_col]);
    if (user.empty()) continue;
    UserMeta row;
    if (gender_col < fields.size()) row.gender = parse_gender(fields[gender_col]);
    if (pc_col && *pc_col < fields.size()) {
      std::uint64_t value = 0;
      if (parse_integer(fields[*pc_col], value)) row.playcount = value;
    }
    meta[std::string(user)] = row;
  }
  return meta;
}

ProfileMap derive_profiles(std::span<const Interaction> interactions,
                           const UserMetaMap* user_meta) {
  ProfileMap profiles;
  std::unordered_map<std::string, std::unordered_set<std::string_view>> distinct;
  for (const auto& event : interactions) {
    auto& profile = profiles[event.user_id];
    profile.user_id = event.user_id;
    profile.total_playcount += event.playcount;
    distinct[event.user_id].insert(event.track_id);
  }
  for (auto& [user, profile] : profiles) {
    profile.distinct_track_count = distinct[user].size();
    if (user_meta == nullptr) continue;
    auto it = user_meta->find(user);
    if (it == user_meta->end()) continue;
    profile.gender = it->second.gender;
    if (it->second.playcount) profile.total_playcount = *it->second.playcount;
  }
  return profiles;
}

std::map<std::string, std::vector<std::string>> user_histories(
    std::span<const Interaction> interactions) {
  std::map<std::string, std::vector<std::size_t>> positions;
  for (std::size_t i = 0; i < interactions.size(); ++i) {
    positions[interactions[i].user_id].push_back(i);
  }
  std::map<std::string, std::vector<std::string>> histories;
  for (auto& [user, rows] : positions) {
    std::stable_sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
      return interactions[a].timestamp < interactions[b].timestamp;
    });
    auto& sequence = histories[user];
    sequence.reserve(rows.size());
    for (auto row : rows) sequence.push_back(interactions[row].track_id);
  }
  return histories;
}

FoldSplit bootstrap_fold(const Dataset& dataset, int fold_index, std::int64_t base_seed) {
  std::map<std::string_view, std::vector<std::size_t>> rows_by_user;
  for (std::size_t i = 0; i < dataset.interactions.size(); ++i) {
    rows_by_user[dataset.interactions[i].user_id].push_back(i);
  }

  Rng rng(static_cast<std::uint64_t>(base_seed + fold_index));
  std::vector<bool> held(dataset.interactions.size(), false);
  FoldSplit split;
  split.fold_index = fold_index;
  for (const auto& [user, rows] : rows_by_user) {
    if (rows.size() < 2) continue;
    const auto pick = rows[rng.below(rows.size())];
    held[pick] = true;
    split.held_out.push_back(dataset.interactions[pick]);
  }
  if (split.held_out.empty()) {
    throw Error(ErrorCode::kNoEligibleUsers, "no user has at least two interactions");
  }
  split.train.reserve(dataset.interactions.size() - split.held_out.size());
  for (std::size_t i = 0; i < dataset.interactions.size(); ++i) {
    if (!held[i]) split.train.push_back(dataset.interactions[i]);
  }
  return split;
}

std::uint64_t corpus_checksum(std::span<const Interaction> interactions) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto mix = [&hash](const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      hash ^= bytes[i];
      hash *= 0x100000001b3ULL;
    }
  };
  for (const auto& event : interactions) {
    mix(event.user_id.data(), event.user_id.size());
    mix("\x1f", 1);
    mix(event.track_id.data(), event.track_id.size());
    mix("\x1f", 1);
    for (int shift = 0; shift < 64; shift += 8) {
      const unsigned char b[2] = {static_cast<unsigned char>(event.timestamp >> shift),
                                  static_cast<unsigned char>(event.playcount >> shift)};
      mix(b, 2);
    }
  }
  return hash;
}

}  // namespace trackrec
