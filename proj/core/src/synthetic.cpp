#include "trackrec/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "trackrec/error.hpp"
#include "trackrec/rng.hpp"

namespace trackrec {

namespace {

std::string padded(const char* prefix, std::uint32_t value, int width) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%s%0*u", prefix, width, value);
  return buffer;
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  if (spec.clusters == 0 || spec.tracks_per_cluster == 0 || spec.users == 0 ||
      spec.mean_events == 0 || spec.max_playcount == 0) {
    throw Error(ErrorCode::kInvalidConfig, "synthetic spec sizes must be positive");
  }
  Rng rng(static_cast<std::uint64_t>(spec.seed));
  SyntheticData data;

  std::vector<std::vector<std::string>> cluster_tracks(spec.clusters);
  for (std::uint32_t c = 0; c < spec.clusters; ++c) {
    for (std::uint32_t t = 0; t < spec.tracks_per_cluster; ++t) {
      auto id = padded(("c" + std::to_string(c) + "_t").c_str(), t, 4);
      data.track_cluster[id] = c;
      cluster_tracks[c].push_back(std::move(id));
    }
  }
  // Cumulative Zipf weights shared by all clusters.
  std::vector<double> cumulative(spec.tracks_per_cluster);
  double total = 0.0;
  for (std::uint32_t t = 0; t < spec.tracks_per_cluster; ++t) {
    total += 1.0 / std::pow(static_cast<double>(t + 1), spec.popularity_skew);
    cumulative[t] = total;
  }

  const std::uint32_t lo = std::max(1u, spec.mean_events / 2);
  const std::uint32_t hi = std::max(lo, spec.mean_events + spec.mean_events / 2);
  const std::int64_t epoch = 1'600'000'000;
  static constexpr char kGenders[] = {'m', 'f', 'n'};

  for (std::uint32_t u = 0; u < spec.users; ++u) {
    const auto user = padded("u", u, 5);
    const std::uint32_t cluster = u % spec.clusters;
    data.user_cluster[user] = cluster;
    if (rng.unit() >= spec.unknown_gender_share) {
      data.user_meta[user] = UserMeta{parse_gender(std::string(1, kGenders[rng.below(3)])), {}};
    }
    const auto events = lo + static_cast<std::uint32_t>(rng.below(hi - lo + 1));
    for (std::uint32_t e = 0; e < events; ++e) {
      const double draw = rng.unit() * total;
      std::uint32_t t = 0;
      while (t + 1 < spec.tracks_per_cluster && cumulative[t] <= draw) ++t;
      Interaction event;
      event.user_id = user;
      event.track_id = cluster_tracks[cluster][t];
      event.timestamp = epoch + std::int64_t{u} * 1'000'000 + std::int64_t{e} * 180;
      event.playcount = 1 + rng.below(spec.max_playcount);
      data.events.push_back(std::move(event));
    }
  }
  return data;
}

void write_events_csv(std::ostream& out, std::span<const Interaction> events) {
  out << "user_id,track_id,timestamp,playcount\n";
  for (const auto& e : events) {
    out << e.user_id << ',' << e.track_id << ',' << e.timestamp << ',' << e.playcount << '\n';
  }
}

void write_user_meta_csv(std::ostream& out, const UserMetaMap& meta) {
  out << "user_id,gender\n";
  for (const auto& [user, row] : meta) {
    const char* token = "u";
    switch (row.gender) {
      case Gender::kMale: token = "m"; break;
      case Gender::kFemale: token = "f"; break;
      case Gender::kNeutral: token = "n"; break;
      case Gender::kUnknown: token = "u"; break;
    }
    out << user << ',' << token << '\n';
  }
}

void write_synthetic(const std::filesystem::path& dir, const SyntheticData& data) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ofstream events(dir / "events.csv", std::ios::trunc);
  std::ofstream users(dir / "users.csv", std::ios::trunc);
  if (ec || !events || !users) throw Error(ErrorCode::kIoError, "cannot write into " + dir.string());
  write_events_csv(events, data.events);
  write_user_meta_csv(users, data.user_meta);
}

}  // namespace trackrec
