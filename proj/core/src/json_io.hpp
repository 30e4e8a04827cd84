#pragma once

// nlohmann/json bindings for configuration types shared by the engine config
// and the model manifest.

#include <json.hpp>

#include "trackrec/embedding.hpp"
#include "trackrec/grouping.hpp"

namespace trackrec {

using Json = nlohmann::ordered_json;

inline Json grouping_to_json(const GroupingConfig& config) {
  Json dims = Json::array();
  for (const auto& dim : config.dimensions) {
    dims.push_back({{"name", dim.name},
                    {"feature", std::string(to_string(dim.feature))},
                    {"boundaries", dim.boundaries}});
  }
  return dims;
}

inline GroupingConfig grouping_from_json(const Json& doc) {
  GroupingConfig config;
  for (const auto& entry : doc) {
    GroupDimension dim;
    dim.name = entry.at("name").get<std::string>();
    dim.feature = parse_feature(entry.at("feature").get<std::string>());
    if (entry.contains("boundaries")) {
      dim.boundaries = entry.at("boundaries").get<std::vector<std::uint64_t>>();
    }
    config.dimensions.push_back(std::move(dim));
  }
  return config;
}

inline Json params_to_json(const TrainParams& p) {
  return {{"dim", p.dim},
          {"window", p.window},
          {"min_count", p.min_count},
          {"negatives", p.negatives},
          {"epochs", p.epochs},
          {"seed", p.seed},
          {"mode", std::string(to_string(p.mode))},
          {"initial_lr", p.initial_lr},
          {"min_lr", p.min_lr},
          {"threads", p.threads}};
}

inline TrainParams params_from_json(const Json& doc, TrainParams p = {}) {
  auto read = [&doc](const char* key, auto& field) {
    if (doc.contains(key)) field = doc.at(key).get<std::remove_reference_t<decltype(field)>>();
  };
  read("dim", p.dim);
  read("window", p.window);
  read("min_count", p.min_count);
  read("negatives", p.negatives);
  read("epochs", p.epochs);
  read("seed", p.seed);
  if (doc.contains("mode")) p.mode = parse_train_mode(doc.at("mode").get<std::string>());
  read("initial_lr", p.initial_lr);
  read("min_lr", p.min_lr);
  read("threads", p.threads);
  return p;
}

}  // namespace trackrec
