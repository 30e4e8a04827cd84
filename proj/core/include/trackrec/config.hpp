#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "trackrec/embedding.hpp"
#include "trackrec/grouping.hpp"
#include "trackrec/metrics.hpp"

namespace trackrec {

struct EngineConfig {
  GroupingConfig grouping = GroupingConfig::defaults();
  TrainParams train_params;
  std::uint32_t k = 100;
  std::uint32_t folds = 4;
  std::int64_t base_seed = 27;
  bool exclude_history = false;
  ItfDenominator itf_denominator = ItfDenominator::kInstances;
  // Ablation: skip embeddings and recommend by popularity only.
  bool popularity_only = false;
  // Concurrent sub-group training / inference tasks. Does not affect results.
  std::uint32_t workers = 1;

  std::string events;
  std::string user_meta;
  std::string model_dir;
  std::string output;

  void validate() const;
  bool operator==(const EngineConfig&) const = default;
};

std::string config_to_json(const EngineConfig& config, int indent = 2);
// Fields absent from the document keep their defaults.
EngineConfig config_from_json(const std::string& text);
EngineConfig load_config(const std::filesystem::path& path);

}  // namespace trackrec
