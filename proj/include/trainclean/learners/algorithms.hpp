#pragma once

// Per-algorithm configurations and trainers. The Hyperparameters-driven entry
// point is AlgorithmLearner; these are exposed for direct use and for tests that
// need settings outside the declared search spaces (e.g. a one-tree forest).

#include <cstdint>
#include <memory>
#include <optional>

#include "trainclean/dataset.hpp"
#include "trainclean/hyperparameters.hpp"
#include "trainclean/learner.hpp"

namespace trainclean::learners {

using ModelPtr = std::shared_ptr<const ModelImpl>;

struct KnnConfig {
  int k = 5;
  bool inverse_distance = false;
};
ModelPtr fit_knn(const Dataset& train, const KnnConfig& config);

struct NaiveBayesConfig {
  bool histogram = false;  // gaussian otherwise
  double laplace = 1.0;
};
ModelPtr fit_naive_bayes(const Dataset& train, const NaiveBayesConfig& config);

enum class FeatureSampling { all, sqrt, log2 };

struct TreeConfig {
  int min_leaf = 2;
  std::optional<int> max_depth;  // nullopt = unlimited
  FeatureSampling sampling = FeatureSampling::all;
  bool prune = true;
  double confidence = 0.25;
};
/// Information-gain tree; multiway nominal splits, binary numeric splits,
/// C4.5-style error-based pruning. Only FeatureSampling other than `all`
/// consumes the seed.
ModelPtr fit_tree(const Dataset& train, const TreeConfig& config, std::uint64_t seed);

struct ForestConfig {
  int trees = 50;
  bool bootstrap = true;
  TreeConfig tree{1, std::nullopt, FeatureSampling::sqrt, false, 0.25};
};
ModelPtr fit_forest(const Dataset& train, const ForestConfig& config, std::uint64_t seed);

struct RuleConfig {
  int min_coverage = 2;
  bool prune = true;
  int optimization_passes = 2;
};
ModelPtr fit_rules(const Dataset& train, const RuleConfig& config, std::uint64_t seed);

struct MlpConfig {
  int hidden_units = 8;
  double learning_rate = 0.1;
  int epochs = 200;
  double momentum = 0.2;
};
ModelPtr fit_mlp(const Dataset& train, const MlpConfig& config, std::uint64_t seed);

struct LogisticConfig {
  double l2 = 1e-4;
  int epochs = 200;
  double learning_rate = 0.5;
};
ModelPtr fit_logistic(const Dataset& train, const LogisticConfig& config);

struct LocallyWeightedConfig {
  int neighborhood = 10;
  bool linear_kernel = true;  // inverse-distance otherwise
};
ModelPtr fit_locally_weighted(const Dataset& train, const LocallyWeightedConfig& config);

/// Builds the implementation for a resolved parameter assignment.
ModelPtr fit_algorithm(AlgorithmId algorithm, const Hyperparameters& params, const Dataset& train,
                       std::uint64_t seed);

}  // namespace trainclean::learners
