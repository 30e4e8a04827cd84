#include "trackrec/dataset.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <sstream>
#include <unordered_set>

#include "test_util.hpp"
#include "trackrec/error.hpp"

namespace trackrec {
namespace {

using testing::event;

Dataset load_text(const std::string& text) {
  std::istringstream in(text);
  return load_events(in);
}

TEST(LoadEvents, ThreeRowFile) {
  const auto ds = load_text("user_id,track_id,timestamp\nu1,tA,1\nu1,tB,2\nu2,tA,3\n");
  EXPECT_EQ(ds.interactions.size(), 3u);
  EXPECT_EQ(ds.profiles.size(), 2u);
  ASSERT_EQ(ds.catalog.size(), 2u);
  EXPECT_EQ(ds.catalog.track_id(0), "tA");
  EXPECT_EQ(ds.catalog.track_id(1), "tB");
  EXPECT_EQ(ds.malformed_count, 0u);
}

TEST(LoadEvents, MalformedTimestampIsSkippedAndCounted) {
  const auto ds = load_text("user_id,track_id,timestamp\nu1,tA,1\nu1,tB,abc\nu2,tA,3\n");
  EXPECT_EQ(ds.interactions.size(), 2u);
  EXPECT_EQ(ds.malformed_count, 1u);
  EXPECT_FALSE(ds.catalog.find("tB").has_value());
}

TEST(LoadEvents, OtherMalformedRows) {
  const auto ds = load_text(
      "user_id,track_id,timestamp,playcount\n"
      "u1,tA,-5,1\n"   // negative timestamp
      ",tA,1,1\n"      // empty user
      "u1,,1,1\n"      // empty track
      "u1,tA,1,x\n"    // bad playcount
      "u1\n"           // too few fields
      "u1,tA,7,\n");   // empty playcount defaults to 1
  EXPECT_EQ(ds.malformed_count, 5u);
  ASSERT_EQ(ds.interactions.size(), 1u);
  EXPECT_EQ(ds.interactions[0].playcount, 1u);
}

TEST(LoadEvents, ColumnOrderIsFreeAndExtrasIgnored) {
  const auto ds =
      load_text("\xEF\xBB\xBFtimestamp,extra,track_id,user_id,playcount\r\n5,zz,tA,u1,4\r\n");
  ASSERT_EQ(ds.interactions.size(), 1u);
  EXPECT_EQ(ds.interactions[0], event("u1", "tA", 5, 4));
}

TEST(LoadEvents, MissingColumn) {
  try {
    load_text("user_id,timestamp\nu1,1\n");
    FAIL() << "expected MissingColumn";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingColumn);
  }
}

TEST(LoadEvents, EmptyDataset) {
  try {
    load_text("user_id,track_id,timestamp\nu1,tA,nope\n");
    FAIL() << "expected EmptyDataset";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyDataset);
  }
}

TEST(LoadEvents, MissingFileIsIoError) {
  try {
    load_events("/nonexistent/trackrec/events.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}

TEST(LoadEvents, CatalogSizeMatchesHashSetScan) {
  std::mt19937 gen(11);
  std::ostringstream csv;
  csv << "user_id,track_id,timestamp\n";
  std::vector<std::string> tracks;
  for (int i = 0; i < 10000; ++i) {
    const auto track = "t" + std::to_string(gen() % 3000);
    tracks.push_back(track);
    csv << "u" << gen() % 500 << ',' << track << ',' << i << '\n';
  }
  testing::TempDir dir;
  testing::write_file(dir / "events.csv", csv.str());
  const auto ds = load_events(dir / "events.csv");

  std::unordered_set<std::string> oracle(tracks.begin(), tracks.end());
  EXPECT_EQ(ds.catalog.size(), oracle.size());

  // Reloading yields the same mapping.
  const auto again = load_events(dir / "events.csv");
  EXPECT_EQ(ds.catalog.ids(), again.catalog.ids());

  // Every profile's distinct count equals a per-user set scan.
  std::map<std::string, std::unordered_set<std::string>> per_user;
  for (const auto& e : ds.interactions) per_user[e.user_id].insert(e.track_id);
  ASSERT_EQ(per_user.size(), ds.profiles.size());
  for (const auto& [user, set] : per_user) {
    EXPECT_EQ(ds.profiles.at(user).distinct_track_count, set.size()) << user;
  }
}

TEST(DeriveProfiles, SumsPlaycountsWithoutMetadata) {
  const std::vector<Interaction> events{event("u1", "tA", 1, 2), event("u1", "tB", 2, 3)};
  const auto profiles = derive_profiles(events);
  const auto& p = profiles.at("u1");
  EXPECT_EQ(p.total_playcount, 5u);
  EXPECT_EQ(p.gender, Gender::kUnknown);
}

TEST(DeriveProfiles, MetadataWins) {
  std::istringstream meta_csv("user_id,gender,playcount\nu1,m,999\nu2,F,\nu3,x,4\n");
  const auto meta = load_user_meta(meta_csv);
  const std::vector<Interaction> events{event("u1", "tA", 1, 2), event("u2", "tA", 1, 7),
                                        event("u3", "tA", 1, 1), event("u4", "tA", 1, 1)};
  const auto profiles = derive_profiles(events, &meta);
  EXPECT_EQ(profiles.at("u1").gender, Gender::kMale);
  EXPECT_EQ(profiles.at("u1").total_playcount, 999u);
  EXPECT_EQ(profiles.at("u2").gender, Gender::kFemale);
  EXPECT_EQ(profiles.at("u2").total_playcount, 7u);
  EXPECT_EQ(profiles.at("u3").gender, Gender::kUnknown);
  EXPECT_EQ(profiles.at("u3").total_playcount, 4u);
  EXPECT_EQ(profiles.at("u4").gender, Gender::kUnknown);
}

TEST(DeriveProfiles, DistinctTrackCount) {
  const std::vector<Interaction> events{event("u1", "tA", 1), event("u1", "tA", 2),
                                        event("u1", "tB", 3)};
  EXPECT_EQ(derive_profiles(events).at("u1").distinct_track_count, 2u);
}

TEST(ParseGender, Tokens) {
  EXPECT_EQ(parse_gender("m"), Gender::kMale);
  EXPECT_EQ(parse_gender("N"), Gender::kNeutral);
  EXPECT_EQ(parse_gender(" f "), Gender::kFemale);
  EXPECT_EQ(parse_gender("male"), Gender::kUnknown);
  EXPECT_EQ(parse_gender(""), Gender::kUnknown);
}

TEST(UserHistories, SortedByTimestampWithStableTies) {
  const std::vector<Interaction> events{event("u1", "late", 9), event("u1", "tie1", 5),
                                        event("u2", "x", 1), event("u1", "tie2", 5),
                                        event("u1", "early", 1)};
  const auto histories = user_histories(events);
  EXPECT_EQ(histories.at("u1"), (std::vector<std::string>{"early", "tie1", "tie2", "late"}));
  EXPECT_EQ(histories.at("u2"), (std::vector<std::string>{"x"}));
}

Dataset make_dataset(std::vector<Interaction> events) {
  Dataset ds;
  for (const auto& e : events) ds.catalog.intern(e.track_id);
  ds.profiles = derive_profiles(events);
  ds.interactions = std::move(events);
  return ds;
}

TEST(BootstrapFold, TwoEventUserAlwaysSplitsOneAndOne) {
  const auto ds = make_dataset({event("u1", "tA", 1), event("u1", "tB", 2), event("u2", "tC", 1)});
  for (int fold = 0; fold < 20; ++fold) {
    const auto split = bootstrap_fold(ds, fold, 27);
    ASSERT_EQ(split.held_out.size(), 1u);
    EXPECT_EQ(split.held_out[0].user_id, "u1");
    EXPECT_EQ(split.train.size(), 2u);  // u1's other event plus u2's single event
  }
}

TEST(BootstrapFold, Deterministic) {
  std::vector<Interaction> events;
  for (int u = 0; u < 30; ++u) {
    for (int i = 0; i < 5; ++i) events.push_back(event("u" + std::to_string(u), "t" + std::to_string(i * u % 7), i));
  }
  const auto ds = make_dataset(events);
  EXPECT_EQ(bootstrap_fold(ds, 2, 27), bootstrap_fold(ds, 2, 27));
  EXPECT_NE(bootstrap_fold(ds, 2, 27).held_out, bootstrap_fold(ds, 3, 27).held_out);
}

TEST(BootstrapFold, NoEligibleUsers) {
  const auto ds = make_dataset({event("u1", "tA", 1), event("u2", "tA", 1)});
  try {
    bootstrap_fold(ds, 0, 27);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoEligibleUsers);
  }
}

TEST(BootstrapFold, HeldOutFrequencyIsUniform) {
  const auto ds = make_dataset({event("u1", "a", 1), event("u1", "b", 2), event("u1", "c", 3),
                                event("u1", "d", 4)});
  std::map<std::string, int> counts;
  const int folds = 1000;
  for (int fold = 0; fold < folds; ++fold) counts[bootstrap_fold(ds, fold, 27).held_out[0].track_id]++;
  for (const auto& track : {"a", "b", "c", "d"}) {
    EXPECT_NEAR(counts[track] / static_cast<double>(folds), 0.25, 0.05) << track;
  }
}

// Merging train and held-out events gives back the original multiset.
TEST(BootstrapFold, ReconstructionProperty) {
  std::mt19937 gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Interaction> events;
    const int n = 2 + static_cast<int>(gen() % 200);
    for (int i = 0; i < n; ++i) {
      events.push_back(event("u" + std::to_string(gen() % 20), "t" + std::to_string(gen() % 15),
                             static_cast<std::int64_t>(gen() % 1000), 1 + gen() % 3));
    }
    events.push_back(events.front());  // at least one eligible user
    const auto ds = make_dataset(events);
    const auto split = bootstrap_fold(ds, trial, 99);

    std::map<std::string, int> per_user;
    for (const auto& e : events) per_user[e.user_id]++;
    std::size_t eligible = 0;
    for (const auto& [u, c] : per_user) eligible += c >= 2 ? 1 : 0;
    ASSERT_EQ(split.held_out.size(), eligible);

    auto merged = split.train;
    merged.insert(merged.end(), split.held_out.begin(), split.held_out.end());
    auto key = [](const Interaction& e) {
      return std::make_tuple(e.user_id, e.track_id, e.timestamp, e.playcount);
    };
    auto sorted = [&](std::vector<Interaction> v) {
      std::sort(v.begin(), v.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
      return v;
    };
    EXPECT_EQ(sorted(merged), sorted(events));
  }
}

TEST(CorpusChecksum, SensitiveToContent) {
  const std::vector<Interaction> a{event("u1", "tA", 1)};
  const std::vector<Interaction> b{event("u1", "tA", 2)};
  EXPECT_EQ(corpus_checksum(a), corpus_checksum(a));
  EXPECT_NE(corpus_checksum(a), corpus_checksum(b));
}

}  // namespace
}  // namespace trackrec
