#include <doctest.h>

#include <algorithm>

#include "../support.hpp"
#include "trainclean/learners/algorithms.hpp"

using namespace trainclean;

namespace {

std::vector<int> predictions(const TrainedModel& model, const Dataset& probes) {
  std::vector<int> out;
  for (const auto& inst : probes.instances()) out.push_back(model.predict(inst));
  return out;
}

Dataset mixed_probe_data(std::uint64_t seed) {
  MixtureOptions opts;
  opts.n_instances = 80;
  opts.n_classes = 3;
  opts.n_numeric = 3;
  opts.n_nominal = 2;
  return generate_mixture(opts, seed).data;
}

}  // namespace

TEST_CASE("declared defaults") {
  CHECK(default_hyperparameters(AlgorithmId::knn).to_json() ==
        nlohmann::json{{"k", 5}, {"weighting", "uniform"}, {"distance", "mixed-euclidean-overlap"}});
  const auto rf = default_hyperparameters(AlgorithmId::random_forest);
  CHECK(rf.integer("trees") == 50);
  CHECK_FALSE(rf.bounded_integer("max_depth").has_value());
  CHECK(rf.choice("features_per_split") == "sqrt");
  const auto dt = default_hyperparameters(AlgorithmId::decision_tree);
  CHECK(dt.integer("min_leaf") == 2);
  CHECK(dt.choice("pruning") == "on");
  CHECK(dt.real("confidence") == 0.25);
}

TEST_CASE("declared spaces") {
  const auto knn = hyperparameter_space(AlgorithmId::knn);
  REQUIRE(knn.find("k"));
  CHECK(knn.find("k")->kind == ParamKind::integer_range);
  CHECK(knn.find("k")->lower == 1);
  CHECK(knn.find("k")->upper == 25);
  CHECK(knn.find("weighting")->choices == std::vector<std::string>{"uniform", "inverse-distance"});

  const auto mlp = hyperparameter_space(AlgorithmId::mlp);
  CHECK(mlp.find("hidden_units")->lower == 2);
  CHECK(mlp.find("hidden_units")->upper == 64);
  CHECK(mlp.find("learning_rate")->kind == ParamKind::log_real_range);
  CHECK(mlp.find("learning_rate")->lower == 1e-4);
  CHECK(mlp.find("learning_rate")->upper == 1e-1);
  CHECK(mlp.find("epochs")->lower == 10);
  CHECK(mlp.find("epochs")->upper == 500);
  CHECK(mlp.find("momentum")->kind == ParamKind::real_range);
  CHECK(mlp.find("momentum")->upper == 0.9);

  const auto rules = hyperparameter_space(AlgorithmId::rule_learner);
  CHECK(rules.find("min_coverage")->lower == 1);
  CHECK(rules.find("min_coverage")->upper == 10);
  CHECK(rules.find("pruning")->choices == std::vector<std::string>{"on", "off"});

  Hyperparameters bad;
  bad.set("k", std::int64_t{0});
  CHECK_THROWS_AS(knn.resolve(bad), Error);
  Hyperparameters unknown;
  unknown.set("depth", std::int64_t{3});
  CHECK_THROWS_AS(knn.resolve(unknown), Error);
}

TEST_CASE("every sampled assignment validates") {
  Rng rng(5);
  for (AlgorithmId a : kAllAlgorithms) {
    const auto space = hyperparameter_space(a);
    for (int i = 0; i < 200; ++i) CHECK(space.accepts(space.sample(rng)));
  }
}

TEST_CASE("naive bayes separates two training instances") {
  const Dataset d = tc_test::numeric_dataset({{0.0, 1.0}, {4.0, -2.0}}, {0, 1});
  const auto model = train(AlgorithmId::naive_bayes, default_hyperparameters(AlgorithmId::naive_bayes), d, 0);
  CHECK(model.predict(d[0]) == 0);
  CHECK(model.predict(d[1]) == 1);
}

TEST_CASE("training is deterministic and closed-world for every algorithm") {
  const Dataset data = mixed_probe_data(3);
  const Dataset probes = mixed_probe_data(4);
  for (AlgorithmId a : kAllAlgorithms) {
    CAPTURE(to_string(a));
    const auto params = default_hyperparameters(a);
    const auto m1 = train(a, params, data, 17);
    const auto m2 = train(a, params, data, 17);
    const auto p1 = predictions(m1, probes);
    CHECK(p1 == predictions(m2, probes));
    for (int p : p1) CHECK((p >= 0 && p < static_cast<int>(data.num_classes())));
  }
}

TEST_CASE("single-class training yields a constant classifier") {
  const Dataset data = mixed_probe_data(8);
  std::vector<InstanceId> keep;
  for (const auto& inst : data.instances())
    if (inst.label == 2) keep.push_back(inst.id);
  const Dataset one = data.subset(keep);
  for (AlgorithmId a : kAllAlgorithms) {
    const auto model = train(a, default_hyperparameters(a), one, 1);
    for (int p : predictions(model, data)) CHECK(p == 2);
  }
  CHECK_THROWS_AS(train(AlgorithmId::knn, default_hyperparameters(AlgorithmId::knn),
                        data.subset(std::vector<InstanceId>{}), 0),
                  Error);
}

TEST_CASE("predict rejects a wrong-width vector") {
  const Dataset data = mixed_probe_data(1);
  const auto model = train(AlgorithmId::knn, default_hyperparameters(AlgorithmId::knn), data, 0);
  const std::vector<double> short_row{1.0};
  try {
    model.predict(short_row);
    FAIL("expected schema_mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::schema_mismatch);
  }
}

TEST_CASE("1-NN memorizes its training set") {
  const Dataset data = mixed_probe_data(6);
  Hyperparameters p;
  p.set("k", std::int64_t{1});
  const auto model = train(AlgorithmId::knn, hyperparameter_space(AlgorithmId::knn).resolve(p), data, 0);
  // Generated values are continuous, so no two rows share a feature vector.
  for (const auto& inst : data.instances()) CHECK(model.predict(inst) == inst.label);
}

TEST_CASE("mlp learns disjoint clusters") {
  const auto g = generate_two_cluster(40, 0.0, 0, 2);
  const auto model = train(AlgorithmId::mlp, default_hyperparameters(AlgorithmId::mlp), g.data, 9);
  // Class A sits at the origin and class B ten units along x.
  CHECK(model.predict(std::vector<double>{0.0, 0.0}) == 0);
  CHECK(model.predict(std::vector<double>{10.0, 0.0}) == 1);
}

TEST_CASE("naive bayes ignores instance order") {
  const Dataset data = mixed_probe_data(12);
  const Dataset probes = mixed_probe_data(13);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(4);
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<Instance> shuffled;
  for (auto pos : order) shuffled.push_back(data[pos]);
  const Dataset permuted(data.features(), data.classes(), shuffled);
  for (const char* model : {"gaussian", "histogram-10bin"}) {
    Hyperparameters p;
    p.set("numeric_model", std::string(model));
    const auto params = hyperparameter_space(AlgorithmId::naive_bayes).resolve(p);
    CHECK(predictions(train(AlgorithmId::naive_bayes, params, data, 0), probes) ==
          predictions(train(AlgorithmId::naive_bayes, params, permuted, 0), probes));
  }
}

TEST_CASE("a one-tree forest without bootstrap equals the tree") {
  const Dataset data = mixed_probe_data(21);
  const Dataset probes = mixed_probe_data(22);
  learners::TreeConfig tree{2, std::nullopt, learners::FeatureSampling::all, false, 0.25};
  learners::ForestConfig forest{1, false, tree};
  const auto t = learners::fit_tree(data, tree, 5);
  const auto f = learners::fit_forest(data, forest, 5);
  for (const auto& inst : probes.instances()) CHECK(t->predict(inst.values) == f->predict(inst.values));
}
