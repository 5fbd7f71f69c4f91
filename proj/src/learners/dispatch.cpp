#include "trainclean/learners/algorithms.hpp"

namespace trainclean::learners {

namespace {

FeatureSampling parse_sampling(const std::string& s) {
  if (s == "sqrt") return FeatureSampling::sqrt;
  if (s == "log2") return FeatureSampling::log2;
  return FeatureSampling::all;
}

}  // namespace

ModelPtr fit_algorithm(AlgorithmId algorithm, const Hyperparameters& p, const Dataset& train, std::uint64_t seed) {
  switch (algorithm) {
    case AlgorithmId::knn:
      return fit_knn(train, {static_cast<int>(p.integer("k")), p.choice("weighting") == "inverse-distance"});
    case AlgorithmId::naive_bayes:
      return fit_naive_bayes(train, {p.choice("numeric_model") == "histogram-10bin", p.real("laplace")});
    case AlgorithmId::decision_tree: {
      TreeConfig config;
      config.min_leaf = static_cast<int>(p.integer("min_leaf"));
      config.confidence = p.real("confidence");
      config.prune = p.choice("pruning") == "on";
      return fit_tree(train, config, seed);
    }
    case AlgorithmId::random_forest: {
      ForestConfig config;
      config.trees = static_cast<int>(p.integer("trees"));
      config.tree.sampling = parse_sampling(p.choice("features_per_split"));
      if (auto depth = p.bounded_integer("max_depth")) config.tree.max_depth = static_cast<int>(*depth);
      return fit_forest(train, config, seed);
    }
    case AlgorithmId::rule_learner:
      return fit_rules(train,
                       {static_cast<int>(p.integer("min_coverage")), p.choice("pruning") == "on",
                        static_cast<int>(p.integer("optimization_passes"))},
                       seed);
    case AlgorithmId::mlp:
      return fit_mlp(train,
                     {static_cast<int>(p.integer("hidden_units")), p.real("learning_rate"),
                      static_cast<int>(p.integer("epochs")), p.real("momentum")},
                     seed);
    case AlgorithmId::logistic:
      return fit_logistic(train, {p.real("l2"), static_cast<int>(p.integer("epochs")), p.real("learning_rate")});
    case AlgorithmId::locally_weighted:
      return fit_locally_weighted(train, {static_cast<int>(p.integer("neighborhood")), p.choice("kernel") == "linear"});
  }
  return nullptr;
}

}  // namespace trainclean::learners
