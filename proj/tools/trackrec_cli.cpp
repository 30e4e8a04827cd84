// trackrec: train, evaluate and query fairness-grouped track-embedding
// recommenders from the command line.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trackrec/config.hpp"
#include "trackrec/error.hpp"
#include "trackrec/logging.hpp"
#include "trackrec/pipeline.hpp"
#include "trackrec/synthetic.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitModelIo = 3;

// Command-line values that override the config file when given.
struct Overrides {
  std::string config_path;
  std::optional<std::string> events, user_meta, model_dir, output, mode, itf_denominator;
  std::optional<std::uint32_t> k, folds, workers;
  std::optional<std::int64_t> seed;
  bool exclude_history = false;
  bool popularity_only = false;
};

void add_common_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON engine config");
  cmd->add_option("--events", o.events, "Listening events CSV");
  cmd->add_option("--user-meta", o.user_meta, "User metadata CSV (user_id,gender[,playcount])");
  cmd->add_option("--model-dir", o.model_dir, "Model directory");
  cmd->add_option("--k", o.k, "Recommendation list length")->check(CLI::PositiveNumber);
  cmd->add_option("--folds", o.folds, "Bootstrap folds")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Base seed for fold resampling");
  cmd->add_option("--mode", o.mode, "Embedding objective")->check(CLI::IsMember({"cbow", "skipgram"}));
  cmd->add_option("--itf-denominator", o.itf_denominator, "instances|predictions")
      ->check(CLI::IsMember({"instances", "predictions"}));
  cmd->add_flag("--exclude-history", o.exclude_history, "Drop already heard tracks");
  cmd->add_option("--workers", o.workers, "Concurrent training/inference tasks")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--output", o.output, "Output file (stdout when omitted)");
}

trackrec::EngineConfig resolve(const Overrides& o) {
  trackrec::EngineConfig config;
  if (!o.config_path.empty()) config = trackrec::load_config(o.config_path);
  if (o.events) config.events = *o.events;
  if (o.user_meta) config.user_meta = *o.user_meta;
  if (o.model_dir) config.model_dir = *o.model_dir;
  if (o.output) config.output = *o.output;
  if (o.k) config.k = *o.k;
  if (o.folds) config.folds = *o.folds;
  if (o.seed) config.base_seed = *o.seed;
  if (o.mode) config.train_params.mode = trackrec::parse_train_mode(*o.mode);
  if (o.itf_denominator) config.itf_denominator = trackrec::parse_itf_denominator(*o.itf_denominator);
  if (o.workers) config.workers = *o.workers;
  if (o.exclude_history) config.exclude_history = true;
  if (o.popularity_only) config.popularity_only = true;
  config.validate();
  return config;
}

// Writes to config.output, or stdout when no output path is set.
template <typename Fn>
void with_output(const trackrec::EngineConfig& config, Fn&& fn) {
  if (config.output.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(config.output, std::ios::trunc);
  if (!out) throw trackrec::Error(trackrec::ErrorCode::kIoError, "cannot write " + config.output);
  fn(out);
}

}  // namespace

int main(int argc, char** argv) {
  trackrec::init_logging();

  CLI::App app{"Fairness-grouped track-embedding recommender"};
  app.require_subcommand(1);
  Overrides o;

  auto* train = app.add_subcommand("train", "Train one model per sub-group and save them");
  add_common_options(train, o);

  auto* evaluate = app.add_subcommand("evaluate", "Bootstrapped leave-one-out evaluation");
  add_common_options(evaluate, o);
  evaluate->add_flag("--popularity-only", o.popularity_only, "Popularity ablation");

  std::vector<std::string> users;
  auto* recommend = app.add_subcommand("recommend", "Write top-k recommendations as CSV");
  add_common_options(recommend, o);
  recommend->add_option("--users", users, "User ids (default: all users)")->delimiter(',');

  auto* stats = app.add_subcommand("stats", "Dataset and sub-group population summary");
  add_common_options(stats, o);

  std::size_t max_users = 0;
  auto* overlap = app.add_subcommand("overlap", "Overlap of per-dimension top-k lists");
  add_common_options(overlap, o);
  overlap->add_option("--max-users", max_users, "Limit on users scanned (0 = all)");

  trackrec::SyntheticSpec synth;
  std::string synth_dir;
  auto* gen = app.add_subcommand("gen-synthetic", "Write a planted-cluster dataset");
  gen->add_option("--output", synth_dir, "Directory for events.csv and users.csv")->required();
  gen->add_option("--clusters", synth.clusters);
  gen->add_option("--tracks-per-cluster", synth.tracks_per_cluster);
  gen->add_option("--users", synth.users);
  gen->add_option("--events-per-user", synth.mean_events);
  gen->add_option("--max-playcount", synth.max_playcount);
  gen->add_option("--skew", synth.popularity_skew);
  gen->add_option("--unknown-gender-share", synth.unknown_gender_share);
  gen->add_option("--seed", synth.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      trackrec::write_synthetic(synth_dir, trackrec::generate_synthetic(synth));
      return 0;
    }
    const auto config = resolve(o);
    if (train->parsed()) {
      const auto manifest = trackrec::cmd_train(config);
      std::size_t present = 0;
      for (const auto& e : manifest.entries) present += e.present ? 1 : 0;
      std::cout << "trained " << present << " models into " << config.model_dir << '\n';
    } else if (evaluate->parsed()) {
      const auto report = trackrec::cmd_evaluate(config);
      std::cout << report.to_table();
      if (!config.output.empty()) {
        with_output(config, [&](std::ostream& out) {
          out << "{\"config\": " << trackrec::config_to_json(config) << ",\n\"report\": "
              << report.to_json() << "}\n";
        });
      }
    } else if (recommend->parsed()) {
      with_output(config, [&](std::ostream& out) { trackrec::cmd_recommend(config, users, out); });
    } else if (stats->parsed()) {
      with_output(config, [&](std::ostream& out) { out << trackrec::cmd_stats(config) << '\n'; });
    } else if (overlap->parsed()) {
      const auto report = trackrec::cmd_overlap(config, max_users);
      with_output(config, [&](std::ostream& out) { out << report.to_json() << '\n'; });
    }
  } catch (const trackrec::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (trackrec::category_of(e.code())) {
      case trackrec::ErrorCategory::kUsage: return kExitUsage;
      case trackrec::ErrorCategory::kData: return kExitData;
      case trackrec::ErrorCategory::kModelIo: return kExitModelIo;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
