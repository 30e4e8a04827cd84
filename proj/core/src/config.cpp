#include "trackrec/config.hpp"

#include <fstream>
#include <sstream>

#include "json_io.hpp"
#include "trackrec/error.hpp"

namespace trackrec {

void EngineConfig::validate() const {
  grouping.validate();
  train_params.validate();
  if (k == 0) throw Error(ErrorCode::kInvalidConfig, "k must be >= 1");
  if (folds == 0) throw Error(ErrorCode::kInvalidConfig, "folds must be >= 1");
  if (workers == 0) throw Error(ErrorCode::kInvalidConfig, "workers must be >= 1");
}

std::string config_to_json(const EngineConfig& config, int indent) {
  Json doc;
  doc["grouping"] = grouping_to_json(config.grouping);
  doc["train_params"] = params_to_json(config.train_params);
  doc["k"] = config.k;
  doc["folds"] = config.folds;
  doc["base_seed"] = config.base_seed;
  doc["exclude_history"] = config.exclude_history;
  doc["itf_denominator"] = std::string(to_string(config.itf_denominator));
  doc["popularity_only"] = config.popularity_only;
  doc["workers"] = config.workers;
  doc["paths"] = {{"events", config.events},
                  {"user_meta", config.user_meta},
                  {"model_dir", config.model_dir},
                  {"output", config.output}};
  return doc.dump(indent);
}

EngineConfig config_from_json(const std::string& text) {
  EngineConfig config;
  try {
    const auto doc = Json::parse(text);
    if (!doc.is_object()) throw Error(ErrorCode::kInvalidConfig, "config must be a JSON object");
    auto read = [&doc](const char* key, auto& field) {
      if (doc.contains(key)) field = doc.at(key).get<std::remove_reference_t<decltype(field)>>();
    };
    if (doc.contains("grouping")) config.grouping = grouping_from_json(doc.at("grouping"));
    if (doc.contains("train_params")) config.train_params = params_from_json(doc.at("train_params"));
    read("k", config.k);
    read("folds", config.folds);
    read("base_seed", config.base_seed);
    read("exclude_history", config.exclude_history);
    if (doc.contains("itf_denominator")) {
      config.itf_denominator = parse_itf_denominator(doc.at("itf_denominator").get<std::string>());
    }
    read("popularity_only", config.popularity_only);
    read("workers", config.workers);
    if (doc.contains("paths")) {
      const auto& paths = doc.at("paths");
      auto path = [&paths](const char* key, std::string& field) {
        if (paths.contains(key)) field = paths.at(key).get<std::string>();
      };
      path("events", config.events);
      path("user_meta", config.user_meta);
      path("model_dir", config.model_dir);
      path("output", config.output);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
  return config;
}

EngineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidConfig, "cannot read config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return config_from_json(buffer.str());
}

}  // namespace trackrec
