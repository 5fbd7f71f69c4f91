#include "trainclean/filtering.hpp"

#include <algorithm>
#include <cstdio>

#include "trainclean/error.hpp"
#include "trainclean/parallel.hpp"

namespace trainclean {

namespace {

std::string phi_key(double phi) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", phi);
  return buf;
}

std::vector<InstanceId> removed_by(const HardnessEstimate& hardness, double phi) {
  std::vector<InstanceId> removed;
  for (std::size_t i = 0; i < hardness.size(); ++i)
    if (hardness.p_correct(i) < phi) removed.push_back(hardness.ids[i]);
  std::sort(removed.begin(), removed.end());
  return removed;
}

Dataset without(const Dataset& data, const std::vector<InstanceId>& removed) {
  std::vector<InstanceId> keep;
  for (const auto& inst : data.instances())
    if (!std::binary_search(removed.begin(), removed.end(), inst.id)) keep.push_back(inst.id);
  return data.subset(keep);
}

}  // namespace

nlohmann::json FilterOutcome::to_json() const {
  nlohmann::json trace_json = nlohmann::json::array();
  for (const auto& t : trace) trace_json.push_back({{"ensemble", t.ensemble}, {"accuracy", t.accuracy}});
  nlohmann::json j = {{"phi", phi}, {"ensemble", describe(ensemble)}, {"removed_ids", removed_ids},
                      {"retained", retained.size()}, {"trace", trace_json}};
  j["baseline_accuracy"] = baseline_accuracy ? nlohmann::json(*baseline_accuracy) : nlohmann::json();
  j["final_accuracy"] = final_accuracy ? nlohmann::json(*final_accuracy) : nlohmann::json();
  return j;
}

void validate_phi(double phi) {
  if (!(phi > 0.0 && phi <= 1.0)) throw Error(ErrorCode::invalid_argument, "phi must lie in (0, 1]");
}

FilterContext::FilterContext(Dataset data, Protocol protocol)
    : data_(std::move(data)), protocol_(protocol), partition_(make_partition(data_, protocol_)) {}

const std::vector<int>& FilterContext::member_counts(const Learner& learner) {
  const std::string key = learner.key();
  {
    std::lock_guard lock(mutex_);
    if (auto it = counts_.find(key); it != counts_.end()) return *it->second;
  }
  auto counts = std::make_shared<const std::vector<int>>(
      cross_validate(data_, partition_, learner, protocol_.seed).correct_counts(data_));
  std::lock_guard lock(mutex_);
  return *counts_.emplace(key, std::move(counts)).first->second;
}

HardnessEstimate FilterContext::hardness(const Ensemble& ensemble) {
  if (ensemble.empty()) throw Error(ErrorCode::empty_ensemble, "hardness needs at least one ensemble member");
  std::vector<const std::vector<int>*> members;
  for (const auto& learner : ensemble) members.push_back(&member_counts(*learner));
  return combine_indicators(data_, members, describe(ensemble), protocol_);
}

double FilterContext::run_la(const Learner& target, const Ensemble& filter, double phi) {
  validate_phi(phi);
  std::vector<std::string> keys;
  for (const auto& l : filter) keys.push_back(l->key());
  std::sort(keys.begin(), keys.end());
  std::string key = target.key() + "|" + phi_key(filter.empty() ? 1.0 : phi);
  for (const auto& k : keys) key += "|" + k;
  {
    std::lock_guard lock(mutex_);
    if (auto it = run_la_cache_.find(key); it != run_la_cache_.end()) return it->second;
  }
  double accuracy;
  if (filter.empty()) {
    accuracy = cross_validate(data_, partition_, target, protocol_.seed).accuracy(data_);
  } else {
    accuracy = masked_accuracy(target, hardness(filter).keep_mask(phi));
  }
  std::lock_guard lock(mutex_);
  run_la_cache_.emplace(key, accuracy);
  return accuracy;
}

double FilterContext::masked_accuracy(const Learner& target, const std::vector<char>& mask) {
  return cross_validate(data_, partition_, target, protocol_.seed, &mask).accuracy(data_);
}

FilterOutcome ensemble_filter(const Dataset& data, const HardnessEstimate& hardness, const Ensemble& ensemble,
                              double phi) {
  validate_phi(phi);
  if (ensemble.empty()) throw Error(ErrorCode::empty_ensemble, "the filter ensemble is empty");
  if (hardness.size() != data.size()) throw Error(ErrorCode::index_mismatch, "hardness does not match the dataset");
  FilterOutcome out;
  out.phi = phi;
  out.ensemble = ensemble;
  out.removed_ids = removed_by(hardness, phi);
  if (out.removed_ids.size() == data.size())
    throw Error(ErrorCode::all_removed, "every instance falls below phi");
  out.retained = without(data, out.removed_ids);
  return out;
}

FilterOutcome ensemble_filter(const Dataset& data, const Ensemble& ensemble, double phi, const Protocol& protocol) {
  validate_phi(phi);
  if (ensemble.empty()) throw Error(ErrorCode::empty_ensemble, "the filter ensemble is empty");
  return ensemble_filter(data, estimate_hardness(data, ensemble, protocol), ensemble, phi);
}

FilterOutcome adaptive_filter(FilterContext& context, const Learner& target, const Ensemble& candidates, double phi) {
  validate_phi(phi);
  if (candidates.empty()) throw Error(ErrorCode::empty_ensemble, "no candidate learners");

  Ensemble chosen;
  Ensemble remaining = candidates;
  double current = context.run_la(target, {}, phi);
  FilterOutcome out;
  out.phi = phi;
  out.baseline_accuracy = current;
  out.trace.push_back({nlohmann::json::array(), current});

  while (!remaining.empty()) {
    std::vector<std::optional<double>> scores(remaining.size());
    parallel_for(remaining.size(), [&](std::size_t i) {
      Ensemble trial = chosen;
      trial.push_back(remaining[i]);
      try {
        scores[i] = context.run_la(target, trial, phi);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::empty_training_set) throw;
      }
    });
    double best = current;
    std::optional<std::size_t> winner;
    for (std::size_t i = 0; i < scores.size(); ++i)
      if (scores[i] && *scores[i] > best) {
        best = *scores[i];
        winner = i;
      }
    if (!winner) break;
    chosen.push_back(remaining[*winner]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(*winner));
    current = best;
    out.trace.push_back({describe(chosen), current});
  }

  out.ensemble = chosen;
  out.final_accuracy = current;
  if (!chosen.empty()) out.removed_ids = removed_by(context.hardness(chosen), phi);
  out.retained = without(context.data(), out.removed_ids);
  return out;
}

FilterOutcome adaptive_filter(const Dataset& data, const Learner& target, const Ensemble& candidates, double phi,
                              const Protocol& protocol) {
  FilterContext context(data, protocol);
  return adaptive_filter(context, target, candidates, phi);
}

double run_la(const Dataset& data, const Learner& target, const Ensemble& filter, double phi,
              const Protocol& protocol) {
  FilterContext context(data, protocol);
  return context.run_la(target, filter, phi);
}

SubsetResult exhaustive_best_subset(FilterContext& context, const Learner& target) {
  const Dataset& data = context.data();
  const std::size_t n = data.size();
  if (n > kExhaustiveCap)
    throw Error(ErrorCode::cap_exceeded, "exhaustive search is capped at " + std::to_string(kExhaustiveCap) + " instances");
  const std::size_t total = (std::size_t{1} << n) - 1;
  std::vector<std::optional<double>> scores(total);
  parallel_for(total, [&](std::size_t job) {
    const std::size_t bits = job + 1;
    std::vector<char> mask(n);
    for (std::size_t i = 0; i < n; ++i) mask[i] = (bits >> i) & 1U;
    try {
      scores[job] = context.masked_accuracy(target, mask);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::empty_training_set) throw;
    }
  });

  auto ids_of = [&](std::size_t bits) {
    std::vector<InstanceId> ids;
    for (std::size_t i = 0; i < n; ++i)
      if ((bits >> i) & 1U) ids.push_back(data[i].id);
    std::sort(ids.begin(), ids.end());
    return ids;
  };
  SubsetResult best;
  bool found = false;
  for (std::size_t job = 0; job < total; ++job) {
    if (!scores[job]) continue;
    ++best.evaluated;
    const double acc = *scores[job];
    auto ids = ids_of(job + 1);
    const bool better = !found || acc > best.accuracy ||
                        (acc == best.accuracy &&
                         (ids.size() > best.ids.size() || (ids.size() == best.ids.size() && ids < best.ids)));
    if (better) {
      best.accuracy = acc;
      best.ids = std::move(ids);
      found = true;
    }
  }
  if (!found) throw Error(ErrorCode::empty_training_set, "no subset leaves every training split non-empty");
  return best;
}

SubsetResult exhaustive_best_subset(const Dataset& data, const Learner& target, const Protocol& protocol) {
  if (data.size() > kExhaustiveCap)
    throw Error(ErrorCode::cap_exceeded, "exhaustive search is capped at " + std::to_string(kExhaustiveCap) + " instances");
  FilterContext context(data, protocol);
  return exhaustive_best_subset(context, target);
}

}  // namespace trainclean
