#include "trackrec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "trackrec/error.hpp"

namespace trackrec {

namespace {

void require_instances(std::span<const EvalInstance> instances) {
  if (instances.empty()) throw Error(ErrorCode::kEmptyInstances, "no evaluation instances");
}

}  // namespace

std::size_t rank_within(const EvalInstance& instance, std::size_t k) {
  const std::size_t limit = std::min(k, instance.predictions.size());
  for (std::size_t i = 0; i < limit; ++i) {
    if (instance.predictions[i] == instance.ground_truth) return i + 1;
  }
  return 0;
}

double hit_rate(std::span<const EvalInstance> instances, std::size_t k) {
  require_instances(instances);
  std::size_t hits = 0;
  for (const auto& instance : instances) hits += rank_within(instance, k) > 0 ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(instances.size());
}

double mrr(std::span<const EvalInstance> instances, std::size_t k) {
  require_instances(instances);
  double sum = 0.0;
  for (const auto& instance : instances) {
    if (auto rank = rank_within(instance, k)) sum += 1.0 / static_cast<double>(rank);
  }
  return sum / static_cast<double>(instances.size());
}

std::string_view to_string(ItfDenominator d) {
  return d == ItfDenominator::kInstances ? "instances" : "predictions";
}

ItfDenominator parse_itf_denominator(std::string_view name) {
  if (name == "instances") return ItfDenominator::kInstances;
  if (name == "predictions") return ItfDenominator::kPredictions;
  throw Error(ErrorCode::kInvalidConfig, "unknown itf_denominator '" + std::string(name) + "'");
}

std::vector<ClassStats> class_stats(std::span<const EvalInstance> instances, std::size_t k) {
  std::vector<ClassStats> classes;
  std::unordered_map<std::string_view, std::size_t> slot;
  for (const auto& instance : instances) {
    auto [it, inserted] = slot.try_emplace(instance.ground_truth, classes.size());
    if (inserted) classes.push_back({instance.ground_truth});
    auto& stats = classes[it->second];
    ++stats.count;
    if (auto rank = rank_within(instance, k)) {
      ++stats.hits;
      stats.reciprocal_rank_sum += 1.0 / static_cast<double>(rank);
    }
  }
  return classes;
}

double per_class_miss_rate(const ClassStats& stats) { return stats.miss_rate(); }

double per_class_one_minus_mrr(const ClassStats& stats) { return 1.0 - stats.mrr(); }

double x_itf(std::span<const EvalInstance> instances, std::size_t k, const ClassMetric& metric,
             ItfDenominator denominator) {
  require_instances(instances);
  double total = static_cast<double>(instances.size());
  if (denominator == ItfDenominator::kPredictions) total *= static_cast<double>(k);

  double weighted = 0.0;
  double mass = 0.0;
  for (const auto& stats : class_stats(instances, k)) {
    const double value = metric(stats);
    const double count = static_cast<double>(stats.count);
    weighted += value * std::log(total / count);
    mass += count * value;
  }
  if (mass == 0.0) return 0.0;
  return weighted / mass;
}

double mr_itf(std::span<const EvalInstance> instances, std::size_t k,
              ItfDenominator denominator) {
  return x_itf(instances, k, per_class_miss_rate, denominator);
}

GroupReport group_report(std::span<const EvalInstance> instances, const ProfileMap& profiles,
                         const GroupingConfig& config, std::size_t k) {
  struct Tally {
    std::uint64_t count = 0;
    std::uint64_t hits = 0;
    double rr = 0.0;
  };
  std::map<SubgroupKey, Tally> tallies;
  std::uint64_t total_hits = 0;
  for (const auto& instance : instances) {
    auto profile = profiles.find(instance.user_id);
    if (profile == profiles.end()) {
      throw Error(ErrorCode::kIndexOutOfRange, "no profile for user '" + instance.user_id + "'");
    }
    const auto rank = rank_within(instance, k);
    total_hits += rank > 0 ? 1 : 0;
    for (const auto& dim : config.dimensions) {
      auto& tally = tallies[assign(profile->second, dim)];
      ++tally.count;
      if (rank > 0) {
        ++tally.hits;
        tally.rr += 1.0 / static_cast<double>(rank);
      }
    }
  }

  GroupReport report;
  if (instances.empty()) return report;
  report.overall_miss_rate =
      1.0 - static_cast<double>(total_hits) / static_cast<double>(instances.size());
  double deviation = 0.0;
  for (const auto& [key, tally] : tallies) {
    GroupStats stats;
    stats.count = tally.count;
    stats.hit_rate = static_cast<double>(tally.hits) / static_cast<double>(tally.count);
    stats.mrr = tally.rr / static_cast<double>(tally.count);
    stats.miss_rate = 1.0 - stats.hit_rate;
    deviation += std::abs(stats.miss_rate - report.overall_miss_rate);
    report.groups.emplace(key, stats);
  }
  report.group_deviation = deviation / static_cast<double>(report.groups.size());
  return report;
}

MetricSummary EvalReport::summary(double FoldMetrics::*metric) const {
  MetricSummary out;
  if (folds.empty()) return out;
  double sum = 0.0;
  for (const auto& fold : folds) sum += fold.*metric;
  out.mean = sum / static_cast<double>(folds.size());
  if (folds.size() < 2) return out;
  double sq = 0.0;
  for (const auto& fold : folds) sq += (fold.*metric - out.mean) * (fold.*metric - out.mean);
  out.stddev = std::sqrt(sq / static_cast<double>(folds.size() - 1));
  return out;
}

namespace {

struct NamedMetric {
  const char* name;
  double FoldMetrics::*member;
};

constexpr NamedMetric kMetrics[] = {
    {"hit_rate", &FoldMetrics::hit_rate},
    {"mrr", &FoldMetrics::mrr},
    {"mr_itf", &FoldMetrics::mr_itf},
    {"group_deviation", &FoldMetrics::group_deviation},
};

}  // namespace

std::string EvalReport::to_json(int indent) const {
  nlohmann::ordered_json doc;
  doc["k"] = k;
  doc["fold_count"] = folds.size();
  for (const auto& m : kMetrics) {
    const auto s = summary(m.member);
    auto& entry = doc["metrics"][m.name];
    entry["per_fold"] = nlohmann::ordered_json::array();
    for (const auto& fold : folds) entry["per_fold"].push_back(fold.*m.member);
    entry["mean"] = s.mean;
    entry["std"] = s.stddev;
  }
  auto& fold_docs = doc["folds"] = nlohmann::ordered_json::array();
  for (const auto& fold : folds) {
    nlohmann::ordered_json f;
    f["fold_index"] = fold.fold_index;
    f["instances"] = fold.instances;
    f["fallback_users"] = fold.fallback_users;
    for (const auto& m : kMetrics) f[m.name] = fold.*m.member;
    auto& groups = f["groups"] = nlohmann::ordered_json::object();
    for (const auto& [key, stats] : fold.groups) {
      groups[to_string(key)] = {{"count", stats.count},
                                {"hit_rate", stats.hit_rate},
                                {"mrr", stats.mrr},
                                {"miss_rate", stats.miss_rate}};
    }
    fold_docs.push_back(std::move(f));
  }
  return doc.dump(indent);
}

std::string EvalReport::to_table() const {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << "metric            mean      std       (k=" << k << ", folds=" << folds.size() << ")\n";
  for (const auto& m : kMetrics) {
    const auto s = summary(m.member);
    out << std::left << std::setw(18) << m.name << std::setw(10) << s.mean << std::setw(10)
        << s.stddev << '\n';
  }
  return out.str();
}

}  // namespace trackrec
