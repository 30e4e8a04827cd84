#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "trackrec/config.hpp"
#include "trackrec/dataset.hpp"
#include "trackrec/grouping.hpp"
#include "trackrec/metrics.hpp"
#include "trackrec/model_io.hpp"
#include "trackrec/recommender.hpp"

namespace trackrec {

// Events plus training-derived profiles (metadata applied when configured).
struct LoadedData {
  Dataset dataset;
  UserMetaMap user_meta;
};

LoadedData load_data(const EngineConfig& config);

struct TrainedModels {
  Manifest manifest;
  ModelSet models;
};

// One model per non-empty sub-group of every dimension, trained only on the
// sequences of that sub-group's users. Sub-groups train concurrently on
// config.workers threads; results do not depend on the worker count.
TrainedModels train_subgroup_models(std::span<const Interaction> train, const ProfileMap& profiles,
                                    const EngineConfig& config);

// Routes a user to their sub-group model in every dimension and fuses the
// per-dimension lists by voting.
class EnsembleRecommender {
 public:
  EnsembleRecommender(const EngineConfig& config, const ModelSet& models,
                      const ProfileMap& profiles, const PopularityIndex& popularity);

  // One list per configured dimension, in configuration order.
  std::vector<RankedList> per_dimension(const std::string& user_id,
                                        std::span<const std::string> history) const;

  RankedList recommend(const std::string& user_id, std::span<const std::string> history) const;

 private:
  const EngineConfig* config_;
  const ProfileMap* profiles_;
  const PopularityIndex* popularity_;
  std::map<SubgroupKey, Recommender> recommenders_;
};

// Fraction of k shared by all given lists.
double overlap_ratio(std::span<const RankedList> lists, std::size_t k);

Manifest cmd_train(const EngineConfig& config);

EvalReport cmd_evaluate(const EngineConfig& config);

// Writes CSV (user_id,rank,track_id,score,source) to `out`. An empty user list
// means every user in the events file.
std::vector<RankedList> cmd_recommend(const EngineConfig& config,
                                      const std::vector<std::string>& user_ids,
                                      std::ostream& out);

// JSON summary of user/track counts and per-dimension bucket populations.
std::string cmd_stats(const EngineConfig& config);

struct OverlapReport {
  std::map<std::string, double> per_user;
  double mean = 0.0;

  std::string to_json() const;
};

// max_users = 0 means every user.
OverlapReport cmd_overlap(const EngineConfig& config, std::size_t max_users);

}  // namespace trackrec
