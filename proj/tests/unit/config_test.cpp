#include "trackrec/config.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "trackrec/error.hpp"

namespace trackrec {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIoError;
}

TEST(EngineConfig, Defaults) {
  const EngineConfig config;
  EXPECT_EQ(config.k, 100u);
  EXPECT_EQ(config.folds, 4u);
  EXPECT_EQ(config.base_seed, 27);
  EXPECT_EQ(config.train_params.dim, 100u);
  EXPECT_EQ(config.train_params.window, 60u);
  EXPECT_EQ(config.train_params.negatives, 5u);
  EXPECT_EQ(config.train_params.epochs, 10u);
  EXPECT_EQ(config.train_params.mode, TrainMode::kSkipGram);
  EXPECT_EQ(config.grouping, GroupingConfig::defaults());
  EXPECT_NO_THROW(config.validate());
}

TEST(EngineConfig, JsonRoundTrip) {
  EngineConfig config;
  config.k = 25;
  config.folds = 2;
  config.base_seed = -3;
  config.exclude_history = true;
  config.itf_denominator = ItfDenominator::kPredictions;
  config.popularity_only = true;
  config.workers = 3;
  config.train_params.mode = TrainMode::kCbow;
  config.train_params.dim = 16;
  config.train_params.initial_lr = 0.05;
  config.grouping.dimensions = {{"pc", Feature::kTotalPlaycount, {5, 50}}};
  config.events = "a.csv";
  config.model_dir = "models";
  EXPECT_EQ(config_from_json(config_to_json(config)), config);
  EXPECT_EQ(config_from_json(config_to_json(config, -1)), config);
}

TEST(EngineConfig, PartialDocumentKeepsDefaults) {
  const auto config = config_from_json(R"({"k": 7, "train_params": {"epochs": 2}})");
  EXPECT_EQ(config.k, 7u);
  EXPECT_EQ(config.train_params.epochs, 2u);
  EXPECT_EQ(config.train_params.dim, 100u);
  EXPECT_EQ(config.folds, 4u);
  EXPECT_EQ(config.grouping, GroupingConfig::defaults());
}

TEST(EngineConfig, LoadFromFile) {
  testing::TempDir dir;
  testing::write_file(dir / "c.json", R"({"folds": 1, "paths": {"events": "x.csv"}})");
  const auto config = load_config(dir / "c.json");
  EXPECT_EQ(config.folds, 1u);
  EXPECT_EQ(config.events, "x.csv");
  EXPECT_EQ(code_of([&] { load_config(dir / "missing.json"); }), ErrorCode::kInvalidConfig);
}

TEST(EngineConfig, InvalidInputs) {
  EXPECT_EQ(code_of([] { config_from_json("{not json"); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of([] { config_from_json("[1,2]"); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of([] { config_from_json(R"({"k": "ten"})"); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of([] { config_from_json(R"({"train_params": {"mode": "glove"}})"); }),
            ErrorCode::kInvalidConfig);

  EngineConfig config;
  config.k = 0;
  EXPECT_EQ(code_of([&] { config.validate(); }), ErrorCode::kInvalidConfig);
  config = {};
  config.folds = 0;
  EXPECT_EQ(code_of([&] { config.validate(); }), ErrorCode::kInvalidConfig);
  config = {};
  config.train_params.dim = 0;
  EXPECT_EQ(code_of([&] { config.validate(); }), ErrorCode::kInvalidConfig);
  config = {};
  config.grouping.dimensions.clear();
  EXPECT_EQ(code_of([&] { config.validate(); }), ErrorCode::kInvalidConfig);
}

}  // namespace
}  // namespace trackrec
