#include "trackrec/grouping.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "trackrec/error.hpp"

namespace trackrec {
namespace {

UserProfile profile(std::string id, Gender g, std::uint64_t plays, std::uint64_t tracks) {
  return UserProfile{std::move(id), g, plays, tracks};
}

const GroupDimension kPlaycount{"playcount", Feature::kTotalPlaycount, {10, 100, 1000}};
const GroupDimension kTrackCount{"track_count", Feature::kDistinctTrackCount, {100, 1000}};
const GroupDimension kGender{"gender", Feature::kGender, {}};

TEST(Assign, PlaycountBuckets) {
  EXPECT_EQ(assign(profile("u", Gender::kMale, 5, 0), kPlaycount).bucket, 0u);
  EXPECT_EQ(assign(profile("u", Gender::kMale, 10, 0), kPlaycount).bucket, 1u);
  EXPECT_EQ(assign(profile("u", Gender::kMale, 999, 0), kPlaycount).bucket, 2u);
  EXPECT_EQ(assign(profile("u", Gender::kMale, 1000, 0), kPlaycount).bucket, 3u);
  EXPECT_EQ(assign(profile("u", Gender::kMale, 0, 0), kPlaycount).bucket, 0u);
}

TEST(Assign, TrackCountBoundaryGoesUp) {
  EXPECT_EQ(assign(profile("u", Gender::kMale, 0, 99), kTrackCount).bucket, 0u);
  EXPECT_EQ(assign(profile("u", Gender::kMale, 0, 100), kTrackCount).bucket, 1u);
  EXPECT_EQ(assign(profile("u", Gender::kMale, 0, 1000), kTrackCount).bucket, 2u);
}

TEST(Assign, GenderIsCategorical) {
  EXPECT_EQ(assign(profile("u", Gender::kMale, 0, 0), kGender).bucket, 0u);
  EXPECT_EQ(assign(profile("u", Gender::kFemale, 0, 0), kGender).bucket, 1u);
  EXPECT_EQ(assign(profile("u", Gender::kNeutral, 0, 0), kGender).bucket, 2u);
  EXPECT_EQ(assign(profile("u", Gender::kUnknown, 0, 0), kGender).bucket, 3u);
  EXPECT_EQ(assign(profile("u", Gender::kUnknown, 0, 0), kGender).dimension, "gender");
}

TEST(Assign, EveryBoundaryLandsInUpperBucket) {
  for (std::size_t i = 0; i < kPlaycount.boundaries.size(); ++i) {
    const auto b = kPlaycount.boundaries[i];
    EXPECT_EQ(bucket_of(b, kPlaycount.boundaries), i + 1);
    EXPECT_EQ(bucket_of(b - 1, kPlaycount.boundaries), i);
  }
}

TEST(Assign, MonotoneInValue) {
  std::mt19937_64 gen(3);
  for (int i = 0; i < 10000; ++i) {
    const auto a = gen() % 5000, b = gen() % 5000;
    const auto lo = std::min(a, b), hi = std::max(a, b);
    EXPECT_LE(bucket_of(lo, kPlaycount.boundaries), bucket_of(hi, kPlaycount.boundaries));
  }
}

TEST(GroupingConfig, DefaultsMatchThreeDimensions) {
  const auto config = GroupingConfig::defaults();
  ASSERT_EQ(config.dimensions.size(), 3u);
  EXPECT_EQ(config.dimensions[0].bucket_count(), 4u);
  EXPECT_EQ(config.dimensions[1].bucket_count(), 4u);
  EXPECT_EQ(config.dimensions[2].bucket_count(), 3u);
  EXPECT_NO_THROW(config.validate());
}

TEST(GroupingConfig, ValidationFailures) {
  auto expect_invalid = [](const GroupingConfig& config) {
    try {
      config.validate();
      FAIL() << "expected InvalidConfig";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig);
    }
  };
  expect_invalid(GroupingConfig{});
  expect_invalid(GroupingConfig{{kGender, kGender}});
  expect_invalid(GroupingConfig{{{"p", Feature::kTotalPlaycount, {10, 10}}}});
  expect_invalid(GroupingConfig{{{"p", Feature::kTotalPlaycount, {100, 10}}}});
  expect_invalid(GroupingConfig{{{"p", Feature::kTotalPlaycount, {0, 10}}}});
  expect_invalid(GroupingConfig{{{"g", Feature::kGender, {1}}}});
}

TEST(Partition, TwoUsersOneGenderDimension) {
  ProfileMap profiles{{"u1", profile("u1", Gender::kMale, 1, 1)},
                      {"u2", profile("u2", Gender::kFemale, 1, 1)}};
  const auto groups = partition(profiles, GroupingConfig{{kGender}});
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups.at(SubgroupKey{"gender", 0}), (std::set<std::string>{"u1"}));
  EXPECT_EQ(groups.at(SubgroupKey{"gender", 1}), (std::set<std::string>{"u2"}));
}

TEST(Partition, LogUniformPlaycountsMatchBruteForce) {
  std::mt19937_64 gen(500);
  std::uniform_real_distribution<double> log_value(0.0, 4.5);
  ProfileMap profiles;
  std::map<std::uint32_t, std::size_t> expected;
  for (int i = 0; i < 500; ++i) {
    const auto id = "u" + std::to_string(i);
    const auto plays = static_cast<std::uint64_t>(std::pow(10.0, log_value(gen)));
    profiles[id] = profile(id, Gender::kMale, plays, 1);
    expected[oracle::bucket(plays, kPlaycount.boundaries)]++;
  }
  const auto groups = partition(profiles, GroupingConfig{{kPlaycount}});
  for (const auto& [bucket, count] : expected) {
    EXPECT_EQ(groups.at(SubgroupKey{"playcount", bucket}).size(), count) << bucket;
  }
}

// Per dimension the sub-groups are disjoint and cover every user.
TEST(Partition, PartitionPropertyOverRandomProfiles) {
  std::mt19937_64 gen(10000);
  ProfileMap profiles;
  for (int i = 0; i < 10000; ++i) {
    const auto id = "u" + std::to_string(i);
    profiles[id] = profile(id, static_cast<Gender>(gen() % 4), gen() % 20000, gen() % 3000);
  }
  const auto config = GroupingConfig::defaults();
  const auto groups = partition(profiles, config);
  std::map<std::string, int> memberships;
  for (const auto& dim : config.dimensions) {
    std::set<std::string> seen;
    std::size_t total = 0;
    for (const auto& [key, users] : groups) {
      if (key.dimension != dim.name) continue;
      EXPECT_LT(key.bucket, dim.bucket_count());
      total += users.size();
      seen.insert(users.begin(), users.end());
      for (const auto& u : users) memberships[u]++;
    }
    EXPECT_EQ(total, profiles.size()) << dim.name;  // disjoint
    EXPECT_EQ(seen.size(), profiles.size()) << dim.name;  // covering
  }
  for (const auto& [user, count] : memberships) ASSERT_EQ(count, 3) << user;
}

TEST(ParseFeature, Names) {
  EXPECT_EQ(parse_feature("gender"), Feature::kGender);
  EXPECT_EQ(parse_feature("total_playcount"), Feature::kTotalPlaycount);
  EXPECT_EQ(parse_feature("distinct_track_count"), Feature::kDistinctTrackCount);
  EXPECT_THROW(parse_feature("country"), Error);
}

}  // namespace
}  // namespace trackrec
