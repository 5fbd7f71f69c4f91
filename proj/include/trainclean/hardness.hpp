#pragma once

#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "trainclean/cross_validation.hpp"
#include "trainclean/dataset.hpp"
#include "trainclean/learner.hpp"

namespace trainclean {

/// Per-instance probability of correct classification, averaged over ensemble
/// members and CV runs with equal weight.
struct HardnessEstimate {
  std::vector<InstanceId> ids;
  std::vector<int> labels;
  std::vector<int> correct;  // indicator sum per position
  int denominator = 0;       // |ensemble| * runs
  nlohmann::json ensemble = nlohmann::json::array();
  Protocol protocol;

  std::size_t size() const { return ids.size(); }
  double p_correct(std::size_t pos) const {
    return static_cast<double>(correct[pos]) / static_cast<double>(denominator);
  }
  std::optional<double> p_correct_of(InstanceId id) const;
  /// 1 where p_correct >= phi (kept), 0 where strictly below.
  std::vector<char> keep_mask(double phi) const;
  nlohmann::json provenance() const;
};

/// Throws empty_ensemble, dataset_too_small (fewer instances than folds or fewer
/// than two classes present).
HardnessEstimate estimate_hardness(const Dataset& data, const Ensemble& ensemble,
                                   const Protocol& protocol = {});
HardnessEstimate estimate_hardness(const Dataset& data, const std::vector<LearnerSpec>& ensemble,
                                   const Protocol& protocol = {});

/// Sums precomputed per-member correct counts (each over protocol.runs runs).
HardnessEstimate combine_indicators(const Dataset& data, const std::vector<const std::vector<int>*>& members,
                                    nlohmann::json ensemble, const Protocol& protocol);

}  // namespace trainclean
