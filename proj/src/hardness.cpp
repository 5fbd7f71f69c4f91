#include "trainclean/hardness.hpp"

#include <algorithm>

#include "trainclean/error.hpp"
#include "trainclean/filtering.hpp"

namespace trainclean {

std::optional<double> HardnessEstimate::p_correct_of(InstanceId id) const {
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == id) return p_correct(i);
  return std::nullopt;
}

std::vector<char> HardnessEstimate::keep_mask(double phi) const {
  std::vector<char> keep(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) keep[i] = !(p_correct(i) < phi);
  return keep;
}

nlohmann::json HardnessEstimate::provenance() const {
  return {{"ensemble", ensemble}, {"protocol", protocol.to_json()}, {"denominator", denominator}};
}

HardnessEstimate combine_indicators(const Dataset& data, const std::vector<const std::vector<int>*>& members,
                                    nlohmann::json ensemble, const Protocol& protocol) {
  if (members.empty()) throw Error(ErrorCode::empty_ensemble, "hardness needs at least one ensemble member");
  HardnessEstimate est;
  est.ids = data.ids();
  est.labels.reserve(data.size());
  for (const auto& inst : data.instances()) est.labels.push_back(inst.label);
  est.correct.assign(data.size(), 0);
  for (const auto* counts : members)
    for (std::size_t i = 0; i < data.size(); ++i) est.correct[i] += (*counts)[i];
  est.denominator = static_cast<int>(members.size()) * protocol.runs;
  est.ensemble = std::move(ensemble);
  est.protocol = protocol;
  return est;
}

HardnessEstimate estimate_hardness(const Dataset& data, const Ensemble& ensemble, const Protocol& protocol) {
  if (ensemble.empty()) throw Error(ErrorCode::empty_ensemble, "hardness needs at least one ensemble member");
  const auto counts = data.class_counts();
  if (std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) < 2)
    throw Error(ErrorCode::dataset_too_small, "hardness needs at least two classes present");
  FilterContext context(data, protocol);
  return context.hardness(ensemble);
}

HardnessEstimate estimate_hardness(const Dataset& data, const std::vector<LearnerSpec>& ensemble,
                                   const Protocol& protocol) {
  return estimate_hardness(data, make_ensemble(ensemble), protocol);
}

}  // namespace trainclean
