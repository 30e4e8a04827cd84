#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trackrec/dataset.hpp"
#include "trackrec/grouping.hpp"

namespace trackrec {

struct EvalInstance {
  std::string user_id;
  std::string ground_truth;
  std::vector<std::string> predictions;  // best first, no duplicates
};

// 1-based rank of the ground truth within the first k predictions, 0 if absent.
std::size_t rank_within(const EvalInstance& instance, std::size_t k);

double hit_rate(std::span<const EvalInstance> instances, std::size_t k);
double mrr(std::span<const EvalInstance> instances, std::size_t k);

// What "# total predictions" in the inverse ground-truth frequency counts:
// evaluation instances N, or N * k emitted predictions.
enum class ItfDenominator : std::uint8_t { kInstances, kPredictions };

std::string_view to_string(ItfDenominator d);
ItfDenominator parse_itf_denominator(std::string_view name);

// Per ground-truth-track tallies at cutoff k.
struct ClassStats {
  std::string track_id;
  std::uint64_t count = 0;              // instances with this ground truth
  std::uint64_t hits = 0;
  double reciprocal_rank_sum = 0.0;

  double miss_rate() const { return static_cast<double>(count - hits) / static_cast<double>(count); }
  double mrr() const { return reciprocal_rank_sum / static_cast<double>(count); }
};

// Classes in order of first appearance among the instances.
std::vector<ClassStats> class_stats(std::span<const EvalInstance> instances, std::size_t k);

using ClassMetric = std::function<double(const ClassStats&)>;

double per_class_miss_rate(const ClassStats& stats);
double per_class_one_minus_mrr(const ClassStats& stats);

// Inverse-frequency weighted aggregate of a per-class metric m:
//   sum_i m_i * ln(D / c_i)  /  sum_i c_i * m_i
// where c_i is the ground-truth count of class i and D is N or N*k. The
// denominator is the instance-level sum of m (for the miss rate: the number
// of missed instances). Returns 0 when the denominator is 0.
double x_itf(std::span<const EvalInstance> instances, std::size_t k, const ClassMetric& metric,
             ItfDenominator denominator = ItfDenominator::kInstances);

// x_itf with the per-class miss rate.
double mr_itf(std::span<const EvalInstance> instances, std::size_t k,
              ItfDenominator denominator = ItfDenominator::kInstances);

struct GroupStats {
  std::uint64_t count = 0;
  double hit_rate = 0.0;
  double mrr = 0.0;
  double miss_rate = 0.0;
};

struct GroupReport {
  std::map<SubgroupKey, GroupStats> groups;  // non-empty sub-groups only
  double overall_miss_rate = 0.0;
  // Mean over sub-groups of |sub-group miss rate - overall miss rate|.
  double group_deviation = 0.0;
};

GroupReport group_report(std::span<const EvalInstance> instances, const ProfileMap& profiles,
                         const GroupingConfig& config, std::size_t k);

struct FoldMetrics {
  int fold_index = 0;
  std::size_t instances = 0;
  std::size_t fallback_users = 0;
  double hit_rate = 0.0;
  double mrr = 0.0;
  double mr_itf = 0.0;
  double group_deviation = 0.0;
  std::map<SubgroupKey, GroupStats> groups;
};

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for a single fold
};

struct EvalReport {
  std::size_t k = 0;
  std::vector<FoldMetrics> folds;

  MetricSummary summary(double FoldMetrics::*metric) const;
  std::string to_json(int indent = 2) const;
  std::string to_table() const;
};

}  // namespace trackrec
