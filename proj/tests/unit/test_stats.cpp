#include <doctest.h>

#include "../oracles.hpp"
#include "../support.hpp"

using namespace trainclean;

namespace {

PairedResults pairs_of(const std::vector<double>& bl, const std::vector<double>& g) {
  PairedResults p;
  for (std::size_t i = 0; i < bl.size(); ++i) p.add("d" + std::to_string(i), bl[i], g[i]);
  return p;
}

}  // namespace

TEST_CASE("cv accuracy oracles") {
  const Dataset d = tc_test::skewed_dataset();
  CHECK(cv_accuracy(*tc_test::stub(), d) == doctest::Approx(0.9).epsilon(1e-12));

  // Every instance has an exact twin; with each pair split across folds 1-NN is perfect.
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const std::vector<double> row{rng.uniform(), rng.uniform()};
    rows.push_back(row);
    rows.push_back(row);
    labels.push_back(i % 2);
    labels.push_back(i % 2);
  }
  const Dataset twins = tc_test::numeric_dataset(rows, labels);
  Hyperparameters p;
  p.set("k", std::int64_t{1});
  const auto nn = make_learner({AlgorithmId::knn, hyperparameter_space(AlgorithmId::knn).resolve(p)});
  Partition split;
  split.k = 10;
  split.ids = twins.ids();
  split.folds.assign(1, std::vector<int>(twins.size()));
  for (std::size_t i = 0; i < twins.size(); ++i) split.folds[0][i] = static_cast<int>((i / 2 + (i % 2) * 5) % 10);
  CHECK(cross_validate(twins, split, *nn, 0).accuracy(twins) == 1.0);
}

TEST_CASE("cv accuracy is the mean of the per-run accuracies") {
  const Dataset d = tc_test::two_cluster(25, 0.6, 3, 4);
  const auto learner = make_learner(LearnerSpec::with_defaults(AlgorithmId::naive_bayes));
  const Protocol protocol{5, 10, 8};
  const auto preds = cross_validate(d, make_partition(d, protocol), *learner, protocol.seed);
  double sum = 0;
  for (int r = 0; r < 5; ++r) {
    int correct = 0;
    for (std::size_t i = 0; i < d.size(); ++i) correct += preds.at(r, i) == d[i].label;
    sum += static_cast<double>(correct) / d.size();
  }
  CHECK(cv_accuracy(*learner, d, protocol) == doctest::Approx(sum / 5).epsilon(1e-12));
}

TEST_CASE("reduction metrics examples") {
  auto up = reduction_metrics(pairs_of({50}, {60}));
  CHECK(*up.red_err == doctest::Approx(20.0));
  CHECK_FALSE(up.red_acc);
  auto down = reduction_metrics(pairs_of({80}, {75}));
  CHECK(*down.red_acc == doctest::Approx(-6.25));
  CHECK_FALSE(down.red_err);
  auto ties = reduction_metrics(pairs_of({70, 80, 90}, {70, 80, 90}));
  CHECK(ties.greater == 0);
  CHECK(ties.equal == 3);
  CHECK(ties.less == 0);
  CHECK(*ties.red_err == 0.0);
  CHECK_FALSE(ties.red_acc);
  auto perfect = reduction_metrics(pairs_of({100, 60}, {100, 80}));
  CHECK(perfect.perfect_baseline.size() == 1);
  CHECK(*perfect.red_err == doctest::Approx(25.0));
}

TEST_CASE("reduction metrics: branches partition the pairs and stay in scale") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> bl, g;
    const int n = 1 + static_cast<int>(rng.below(12));
    for (int i = 0; i < n; ++i) {
      bl.push_back(rng.uniform(1.0, 99.0));
      g.push_back(rng.below(4) == 0 ? bl.back() : rng.uniform(0.0, 100.0));
    }
    const auto m = reduction_metrics(pairs_of(bl, g));
    CHECK(m.greater + m.equal + m.less == n);
    if (m.red_err) CHECK((*m.red_err >= 0.0 && *m.red_err <= 100.0));
    if (m.red_acc) CHECK((*m.red_acc >= -100.0 && *m.red_acc < 0.0));
  }
}

TEST_CASE("wilcoxon: all positive distinct differences on six pairs") {
  const auto v = wilcoxon(pairs_of({50, 50, 50, 50, 50, 50}, {51, 52, 53, 54, 55, 56}));
  CHECK(v.w_minus == 0);
  CHECK(v.w_plus == 21);
  CHECK(v.p_value == doctest::Approx(2.0 / 64));
  CHECK(v.significant);
  CHECK(v.direction == Direction::treatment);
}

TEST_CASE("wilcoxon: all zero differences") {
  const auto v = wilcoxon(pairs_of({1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}));
  CHECK(v.n_effective <= 1);
  CHECK_FALSE(v.significant);
}

TEST_CASE("wilcoxon: mirror symmetry, rank-sum identity and brute force") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 5 + static_cast<int>(rng.below(8));
    std::vector<double> bl, g;
    for (int i = 0; i < n; ++i) {
      bl.push_back(rng.uniform(60, 90));
      // Coarse values produce zeros and tied magnitudes.
      g.push_back(bl.back() + static_cast<double>(static_cast<int>(rng.below(9)) - 3));
    }
    const auto p = pairs_of(bl, g);
    const auto v = wilcoxon(p);
    const auto m = wilcoxon(p.mirrored());
    CHECK(v.w_plus + v.w_minus == doctest::Approx(v.n_effective * (v.n_effective + 1) / 2.0));
    CHECK(v.w_plus == m.w_minus);
    CHECK(v.p_value == m.p_value);
    CHECK(v.significant == m.significant);
    if (v.significant) CHECK(v.direction != m.direction);
    const auto o = tc_test::signed_rank_brute_force(bl, g);
    if (o.n == 0) continue;
    CHECK(v.n_effective == o.n);
    CHECK(v.w_plus == doctest::Approx(o.w_plus));
    CHECK(v.p_value == doctest::Approx(o.p_value).epsilon(1e-12));
  }
}

TEST_CASE("wilcoxon: fewer than five pairs is an error") {
  try {
    wilcoxon(pairs_of({1, 2, 3, 4}, {2, 3, 4, 5}));
    FAIL("expected too_few_pairs");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::too_few_pairs);
  }
}

TEST_CASE("wilcoxon: large samples use the normal approximation") {
  std::vector<double> bl(30, 50.0), g;
  for (int i = 0; i < 30; ++i) g.push_back(50.0 + (i % 3 == 0 ? -1.0 : 1.0) * (i + 1));
  const auto v = wilcoxon(pairs_of(bl, g));
  CHECK(v.method == WilcoxonMethod::normal);
  const double n = 30;
  const double z = (std::min(v.w_plus, v.w_minus) - n * (n + 1) / 4) / std::sqrt(n * (n + 1) * (2 * n + 1) / 24);
  CHECK(v.p_value == doctest::Approx(std::erfc(-z / std::sqrt(2.0))).epsilon(1e-9));
}

TEST_CASE("format column") {
  const auto p = pairs_of({80.74}, {83.53});
  const auto text = format_column(p, reduction_metrics(p), std::nullopt);
  CHECK(text.find("83.53") != std::string::npos);
  CHECK(text.find("1,0,0") != std::string::npos);
  CHECK(text.find("NA") != std::string::npos);
}
