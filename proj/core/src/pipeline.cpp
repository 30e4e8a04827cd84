#include "trackrec/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "json_io.hpp"
#include "log.hpp"
#include "trackrec/ensemble.hpp"
#include "trackrec/error.hpp"

namespace trackrec {

namespace {

// Runs fn(i) for i in [0, n) on up to `workers` threads. The first exception
// thrown by any task is rethrown after all workers finish.
template <typename Fn>
void parallel_for(std::size_t n, std::uint32_t workers, Fn&& fn) {
  const std::size_t threads = std::min<std::size_t>(std::max(1u, workers), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

const std::vector<std::string> kNoHistory;

const std::vector<std::string>& history_of(
    const std::map<std::string, std::vector<std::string>>& histories, const std::string& user) {
  auto it = histories.find(user);
  return it == histories.end() ? kNoHistory : it->second;
}

}  // namespace

LoadedData load_data(const EngineConfig& config) {
  if (config.events.empty()) throw Error(ErrorCode::kInvalidConfig, "no events file given");
  LoadedData data;
  data.dataset = load_events(config.events);
  if (!config.user_meta.empty()) {
    data.user_meta = load_user_meta(config.user_meta);
    data.dataset.profiles = derive_profiles(data.dataset.interactions, &data.user_meta);
  }
  return data;
}

TrainedModels train_subgroup_models(std::span<const Interaction> train, const ProfileMap& profiles,
                                    const EngineConfig& config) {
  const auto histories = user_histories(train);
  const auto groups = partition(profiles, config.grouping);

  TrainedModels result;
  result.manifest.grouping = config.grouping;
  result.manifest.params = config.train_params;
  result.manifest.corpus_checksum = corpus_checksum(train);

  struct Job {
    SubgroupKey key;
    std::vector<Sentence> sentences;
  };
  std::vector<Job> jobs;
  for (const auto& dim : config.grouping.dimensions) {
    for (std::uint32_t bucket = 0; bucket < dim.bucket_count(); ++bucket) {
      SubgroupKey key{dim.name, bucket};
      ManifestEntry entry;
      entry.key = key;
      auto members = groups.find(key);
      std::vector<Sentence> sentences;
      if (members != groups.end()) {
        for (const auto& user : members->second) {
          auto it = histories.find(user);
          if (it != histories.end() && !it->second.empty()) sentences.push_back(it->second);
        }
      }
      entry.users = sentences.size();
      entry.present = !sentences.empty();
      if (entry.present) {
        entry.file = model_file_name(key);
        jobs.push_back({key, std::move(sentences)});
      }
      result.manifest.entries.push_back(std::move(entry));
    }
  }

  std::vector<EmbeddingModel> trained(jobs.size());
  parallel_for(jobs.size(), config.workers, [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    trained[i] = trackrec::train(jobs[i].sentences, config.train_params, jobs[i].key);
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    log::info("model {}: {} users, {} tracks, {:.3f}s", to_string(jobs[i].key),
              jobs[i].sentences.size(), trained[i].size(), took.count());
  });

  for (std::size_t i = 0; i < jobs.size(); ++i) {
    for (auto& entry : result.manifest.entries) {
      if (entry.key == jobs[i].key) entry.vocab_size = trained[i].size();
    }
    result.models.emplace(jobs[i].key, std::move(trained[i]));
  }
  return result;
}

EnsembleRecommender::EnsembleRecommender(const EngineConfig& config, const ModelSet& models,
                                         const ProfileMap& profiles,
                                         const PopularityIndex& popularity)
    : config_(&config), profiles_(&profiles), popularity_(&popularity) {
  for (const auto& [key, model] : models) recommenders_.emplace(key, Recommender(model, popularity));
}

std::vector<RankedList> EnsembleRecommender::per_dimension(
    const std::string& user_id, std::span<const std::string> history) const {
  std::vector<RankedList> lists;
  lists.reserve(config_->grouping.dimensions.size());
  auto profile = profiles_->find(user_id);
  for (const auto& dim : config_->grouping.dimensions) {
    const Recommender* recommender = nullptr;
    if (profile != profiles_->end()) {
      auto it = recommenders_.find(assign(profile->second, dim));
      if (it != recommenders_.end()) recommender = &it->second;
    }
    if (recommender) {
      lists.push_back(recommender->recommend(user_id, history, config_->k, config_->exclude_history));
    } else {
      lists.push_back(
          fallback_list(user_id, history, *popularity_, config_->k, config_->exclude_history));
    }
  }
  return lists;
}

RankedList EnsembleRecommender::recommend(const std::string& user_id,
                                          std::span<const std::string> history) const {
  const auto lists = per_dimension(user_id, history);
  return vote(lists, config_->k);
}

double overlap_ratio(std::span<const RankedList> lists, std::size_t k) {
  if (lists.empty() || k == 0) return 0.0;
  std::set<std::string> common;
  for (const auto& e : lists.front().entries) common.insert(e.track_id);
  for (std::size_t l = 1; l < lists.size(); ++l) {
    std::set<std::string> next;
    for (const auto& e : lists[l].entries) {
      if (common.contains(e.track_id)) next.insert(e.track_id);
    }
    common = std::move(next);
  }
  return static_cast<double>(common.size()) / static_cast<double>(k);
}

Manifest cmd_train(const EngineConfig& config) {
  config.validate();
  if (config.model_dir.empty()) throw Error(ErrorCode::kInvalidConfig, "no model directory given");
  log::info("effective config: {}", config_to_json(config, -1));
  const auto data = load_data(config);
  auto trained = train_subgroup_models(data.dataset.interactions, data.dataset.profiles, config);
  save_model_set(config.model_dir, trained.manifest, trained.models);
  return trained.manifest;
}

EvalReport cmd_evaluate(const EngineConfig& config) {
  config.validate();
  log::info("effective config: {}", config_to_json(config, -1));
  const auto data = load_data(config);
  const UserMetaMap* meta = config.user_meta.empty() ? nullptr : &data.user_meta;

  EvalReport report;
  report.k = config.k;
  for (std::uint32_t fold = 0; fold < config.folds; ++fold) {
    const auto started = std::chrono::steady_clock::now();
    const auto split = bootstrap_fold(data.dataset, static_cast<int>(fold), config.base_seed);
    // Test-time features come from the fold's training data only.
    const auto profiles = derive_profiles(split.train, meta);
    const auto histories = user_histories(split.train);
    const auto popularity = build_popularity(split.train, data.dataset.catalog);

    TrainedModels trained;
    if (!config.popularity_only) trained = train_subgroup_models(split.train, profiles, config);
    const EnsembleRecommender ensemble(config, trained.models, profiles, popularity);

    std::vector<EvalInstance> instances(split.held_out.size());
    std::vector<char> fell_back(split.held_out.size(), 0);
    parallel_for(split.held_out.size(), config.workers, [&](std::size_t i) {
      const auto& held = split.held_out[i];
      const auto& history = history_of(histories, held.user_id);
      const auto list = config.popularity_only
                            ? fallback_list(held.user_id, history, popularity, config.k,
                                            config.exclude_history)
                            : ensemble.recommend(held.user_id, history);
      fell_back[i] = list.source == ListSource::kFallback;
      instances[i] = {held.user_id, held.track_id, list.track_ids()};
    });

    FoldMetrics metrics;
    metrics.fold_index = static_cast<int>(fold);
    metrics.instances = instances.size();
    metrics.fallback_users = static_cast<std::size_t>(std::count(fell_back.begin(), fell_back.end(), 1));
    metrics.hit_rate = hit_rate(instances, config.k);
    metrics.mrr = mrr(instances, config.k);
    metrics.mr_itf = mr_itf(instances, config.k, config.itf_denominator);
    const auto groups = group_report(instances, profiles, config.grouping, config.k);
    metrics.group_deviation = groups.group_deviation;
    metrics.groups = groups.groups;
    report.folds.push_back(std::move(metrics));

    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - started;
    log::info("fold {}: HR@{}={:.4f} MRR={:.4f} ({:.2f}s)", fold, config.k,
              report.folds.back().hit_rate, report.folds.back().mrr, took.count());
  }
  return report;
}

std::vector<RankedList> cmd_recommend(const EngineConfig& config,
                                      const std::vector<std::string>& user_ids,
                                      std::ostream& out) {
  config.validate();
  if (config.model_dir.empty()) throw Error(ErrorCode::kInvalidConfig, "no model directory given");
  const auto data = load_data(config);
  Manifest manifest;
  const auto models =
      load_model_set(config.model_dir, &manifest, &config.grouping, &config.train_params);
  if (manifest.corpus_checksum != corpus_checksum(data.dataset.interactions)) {
    log::warn("events differ from the corpus the models were trained on");
  }
  const auto histories = user_histories(data.dataset.interactions);
  const auto popularity = build_popularity(data.dataset);
  const EnsembleRecommender ensemble(config, models, data.dataset.profiles, popularity);

  std::vector<std::string> users = user_ids;
  if (users.empty()) {
    for (const auto& [user, profile] : data.dataset.profiles) users.push_back(user);
  }
  std::vector<RankedList> lists(users.size());
  parallel_for(users.size(), config.workers, [&](std::size_t i) {
    lists[i] = ensemble.recommend(users[i], history_of(histories, users[i]));
  });
  write_recommendations_header(out);
  for (const auto& list : lists) write_recommendations(out, list);
  return lists;
}

namespace {

Json distribution(std::vector<std::uint64_t> values) {
  if (values.empty()) return Json::object();
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (auto v : values) sum += static_cast<double>(v);
  return {{"min", values.front()},
          {"median", values[values.size() / 2]},
          {"mean", sum / static_cast<double>(values.size())},
          {"max", values.back()}};
}

}  // namespace

std::string cmd_stats(const EngineConfig& config) {
  config.grouping.validate();
  const auto data = load_data(config);
  const auto& profiles = data.dataset.profiles;
  const auto histories = user_histories(data.dataset.interactions);

  Json doc;
  doc["config"] = Json::parse(config_to_json(config, -1));
  doc["users"] = profiles.size();
  doc["interactions"] = data.dataset.interactions.size();
  doc["tracks"] = data.dataset.catalog.size();
  doc["malformed_rows"] = data.dataset.malformed_count;

  std::vector<std::uint64_t> playcounts, track_counts, events;
  Json genders = {{"male", 0}, {"female", 0}, {"neutral", 0}, {"unknown", 0}};
  for (const auto& [user, profile] : profiles) {
    playcounts.push_back(profile.total_playcount);
    track_counts.push_back(profile.distinct_track_count);
    events.push_back(history_of(histories, user).size());
    auto& slot = genders[std::string(to_string(profile.gender))];
    slot = slot.get<std::uint64_t>() + 1;
  }
  doc["gender"] = genders;
  doc["total_playcount"] = distribution(playcounts);
  doc["distinct_track_count"] = distribution(track_counts);
  doc["events_per_user"] = distribution(events);

  const auto groups = partition(profiles, config.grouping);
  auto& dims = doc["dimensions"] = Json::object();
  for (const auto& dim : config.grouping.dimensions) {
    Json buckets = Json::array();
    for (std::uint32_t b = 0; b < dim.bucket_count(); ++b) {
      auto it = groups.find(SubgroupKey{dim.name, b});
      buckets.push_back(it == groups.end() ? 0 : it->second.size());
    }
    dims[dim.name] = {{"feature", std::string(to_string(dim.feature))},
                      {"boundaries", dim.boundaries},
                      {"bucket_users", buckets}};
  }
  return doc.dump(2);
}

std::string OverlapReport::to_json() const {
  Json doc;
  doc["users"] = per_user.size();
  doc["mean_overlap"] = mean;
  doc["per_user"] = per_user;
  return doc.dump(2);
}

OverlapReport cmd_overlap(const EngineConfig& config, std::size_t max_users) {
  config.validate();
  if (config.model_dir.empty()) throw Error(ErrorCode::kInvalidConfig, "no model directory given");
  const auto data = load_data(config);
  const auto models = load_model_set(config.model_dir, nullptr, &config.grouping, &config.train_params);
  const auto histories = user_histories(data.dataset.interactions);
  const auto popularity = build_popularity(data.dataset);
  const EnsembleRecommender ensemble(config, models, data.dataset.profiles, popularity);

  std::vector<std::string> users;
  for (const auto& [user, profile] : data.dataset.profiles) {
    if (max_users != 0 && users.size() >= max_users) break;
    users.push_back(user);
  }
  std::vector<double> ratios(users.size());
  parallel_for(users.size(), config.workers, [&](std::size_t i) {
    const auto lists = ensemble.per_dimension(users[i], history_of(histories, users[i]));
    ratios[i] = overlap_ratio(lists, config.k);
  });

  OverlapReport report;
  double sum = 0.0;
  for (std::size_t i = 0; i < users.size(); ++i) {
    report.per_user[users[i]] = ratios[i];
    sum += ratios[i];
  }
  if (!users.empty()) report.mean = sum / static_cast<double>(users.size());
  return report;
}

}  // namespace trackrec
