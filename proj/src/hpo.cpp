#include "trainclean/hpo.hpp"

#include "trainclean/error.hpp"
#include "trainclean/parallel.hpp"
#include "trainclean/random.hpp"

namespace trainclean {

nlohmann::json HpoResult::to_json() const {
  nlohmann::json trials_json = nlohmann::json::array();
  for (const auto& t : trials) {
    nlohmann::json entry = {{"params", t.params.to_json()}, {"accuracy", t.accuracy}};
    if (t.failure) entry["failure"] = *t.failure;
    trials_json.push_back(std::move(entry));
  }
  return {{"algorithm", to_string(algorithm)},
          {"n_trials", n_trials},
          {"seed", seed},
          {"trials", trials_json},
          {"best_params", best_trial().params.to_json()},
          {"best_accuracy", best_trial().accuracy}};
}

std::vector<Hyperparameters> draw_assignments(AlgorithmId algorithm, int count, std::uint64_t seed) {
  const auto space = hyperparameter_space(algorithm);
  Rng rng(derive_seed(seed, {tag("hpo-draws"), static_cast<std::uint64_t>(algorithm)}));
  std::vector<Hyperparameters> draws;
  draws.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) draws.push_back(space.sample(rng));
  return draws;
}

HpoResult random_search(AlgorithmId algorithm, const Dataset& data, int n_trials, const Protocol& protocol) {
  if (n_trials < 1) throw Error(ErrorCode::invalid_argument, "n_trials must be at least 1");
  HpoResult result;
  result.algorithm = algorithm;
  result.n_trials = n_trials;
  result.seed = protocol.seed;
  const auto draws = draw_assignments(algorithm, n_trials, protocol.seed);
  const Partition partition = make_partition(data, protocol);
  result.trials.resize(draws.size());
  parallel_for(draws.size(), [&](std::size_t i) {
    Trial& trial = result.trials[i];
    trial.params = draws[i];
    try {
      AlgorithmLearner learner({algorithm, draws[i]});
      trial.accuracy = cross_validate(data, partition, learner, protocol.seed).accuracy(data);
    } catch (const std::exception& e) {
      trial.accuracy = 0.0;
      trial.failure = e.what();
    }
  });
  for (std::size_t i = 1; i < result.trials.size(); ++i)
    if (result.trials[i].accuracy > result.trials[result.best].accuracy) result.best = i;
  return result;
}

}  // namespace trainclean
