#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trainclean/cross_validation.hpp"
#include "trainclean/dataset.hpp"
#include "trainclean/hyperparameters.hpp"

namespace trainclean {

struct Trial {
  Hyperparameters params;
  double accuracy = 0.0;
  std::optional<std::string> failure;
};

struct HpoResult {
  AlgorithmId algorithm = AlgorithmId::knn;
  std::vector<Trial> trials;
  std::size_t best = 0;
  int n_trials = 0;
  std::uint64_t seed = 0;

  const Trial& best_trial() const { return trials[best]; }
  LearnerSpec best_spec() const { return {algorithm, best_trial().params}; }
  nlohmann::json to_json() const;
};

/// The first `count` draws of the search stream for (algorithm, seed). Draws are a
/// prefix-stable sequence: drawing m+1 repeats the first m.
std::vector<Hyperparameters> draw_assignments(AlgorithmId algorithm, int count, std::uint64_t seed);

/// Random search; every trial is scored on the protocol's shared partition.
/// Failed trials score 0 and carry a note. Throws invalid_argument when n_trials < 1.
HpoResult random_search(AlgorithmId algorithm, const Dataset& data, int n_trials = 10,
                        const Protocol& protocol = {});

}  // namespace trainclean
