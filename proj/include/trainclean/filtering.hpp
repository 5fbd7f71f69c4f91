#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trainclean/cross_validation.hpp"
#include "trainclean/dataset.hpp"
#include "trainclean/hardness.hpp"
#include "trainclean/learner.hpp"

namespace trainclean {

struct TraceEntry {
  nlohmann::json ensemble;  // filter set so far
  double accuracy = 0.0;
};

struct FilterOutcome {
  double phi = 0.0;
  Ensemble ensemble;
  std::vector<InstanceId> removed_ids;  // sorted
  Dataset retained;
  std::vector<TraceEntry> trace;  // adaptive only: baseline first, strictly increasing
  std::optional<double> baseline_accuracy;
  std::optional<double> final_accuracy;

  nlohmann::json to_json() const;
};

/// Binds a dataset and protocol and memoizes everything the filters recompute:
/// the shared partition, each member's CV correct counts, and run_la results.
/// Safe for concurrent use.
class FilterContext {
 public:
  FilterContext(Dataset data, Protocol protocol);

  const Dataset& data() const { return data_; }
  const Protocol& protocol() const { return protocol_; }
  const Partition& partition() const { return partition_; }

  /// Correct-prediction counts (0..runs) per position for one learner.
  const std::vector<int>& member_counts(const Learner& learner);
  HardnessEstimate hardness(const Ensemble& ensemble);

  /// CV accuracy of target when each training split drops instances whose
  /// hardness under `filter` is strictly below phi. Empty filter = no filtering.
  double run_la(const Learner& target, const Ensemble& filter, double phi);
  /// CV accuracy with an explicit training mask (1 = may be used for training).
  double masked_accuracy(const Learner& target, const std::vector<char>& mask);

 private:
  Dataset data_;
  Protocol protocol_;
  Partition partition_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const std::vector<int>>> counts_;
  std::map<std::string, double> run_la_cache_;
};

void validate_phi(double phi);

/// L-filter: remove every instance with p_correct < phi.
/// Throws invalid_argument (phi outside (0,1]), empty_ensemble, all_removed.
FilterOutcome ensemble_filter(const Dataset& data, const Ensemble& ensemble, double phi,
                              const Protocol& protocol = {});
FilterOutcome ensemble_filter(const Dataset& data, const HardnessEstimate& hardness,
                              const Ensemble& ensemble, double phi);

/// Greedy adaptive filter construction. Candidate evaluations whose filtered
/// training split becomes empty are skipped.
FilterOutcome adaptive_filter(FilterContext& context, const Learner& target, const Ensemble& candidates,
                              double phi);
FilterOutcome adaptive_filter(const Dataset& data, const Learner& target, const Ensemble& candidates,
                              double phi, const Protocol& protocol = {});

double run_la(const Dataset& data, const Learner& target, const Ensemble& filter, double phi,
              const Protocol& protocol = {});

struct SubsetResult {
  std::vector<InstanceId> ids;
  double accuracy = 0.0;
  std::size_t evaluated = 0;  // feasible subsets
};

inline constexpr std::size_t kExhaustiveCap = 15;

/// Exhaustive search over non-empty training subsets (applied as per-fold
/// training masks). Subsets that leave some training split empty are skipped.
/// Ties prefer larger subsets, then lexicographically smaller id lists.
SubsetResult exhaustive_best_subset(FilterContext& context, const Learner& target);
SubsetResult exhaustive_best_subset(const Dataset& data, const Learner& target,
                                    const Protocol& protocol = {});

}  // namespace trainclean
