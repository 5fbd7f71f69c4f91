#include <doctest.h>

#include <algorithm>

#include "../support.hpp"

using namespace trainclean;
using tc_test::stub;

namespace {

const Protocol kSmall{3, 5, 11};

LearnerPtr knn(int k = 5) {
  Hyperparameters p;
  p.set("k", std::int64_t{k});
  return make_learner({AlgorithmId::knn, hyperparameter_space(AlgorithmId::knn).resolve(p)});
}

}  // namespace

TEST_CASE("hardness: constant-majority stub on 90/10 data") {
  const Dataset d = tc_test::skewed_dataset();
  const auto h = estimate_hardness(d, Ensemble{stub()});
  CHECK(h.denominator == 5);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(h.p_correct(i) == (d[i].label == 0 ? 1.0 : 0.0));
}

TEST_CASE("hardness: identical members give the single-member estimate") {
  const Dataset d = tc_test::two_cluster(30, 0.5, 3, 2);
  const auto one = estimate_hardness(d, Ensemble{knn()}, kSmall);
  const auto three = estimate_hardness(d, Ensemble{knn(), knn(), knn()}, kSmall);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(one.p_correct(i) == three.p_correct(i));
}

TEST_CASE("hardness: values are multiples of the reciprocal denominator") {
  const Dataset d = tc_test::two_cluster(30, 0.5, 3, 2);
  const auto h = estimate_hardness(d, make_ensemble({LearnerSpec::with_defaults(AlgorithmId::knn),
                                                     LearnerSpec::with_defaults(AlgorithmId::naive_bayes)}),
                                   kSmall);
  CHECK(h.denominator == 6);
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(h.correct[i] >= 0);
    CHECK(h.correct[i] <= 6);
  }
}

TEST_CASE("hardness: appending an always-wrong stub never raises p_correct") {
  const Dataset d = tc_test::two_cluster(30, 0.5, 3, 5);
  const Ensemble base{knn(), make_learner(LearnerSpec::with_defaults(AlgorithmId::naive_bayes))};
  Ensemble extended = base;
  extended.push_back(std::make_shared<tc_test::AlwaysWrongStub>(d));
  const auto a = estimate_hardness(d, base, kSmall);
  const auto b = estimate_hardness(d, extended, kSmall);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(b.p_correct(i) <= a.p_correct(i));
}

TEST_CASE("hardness: deterministic under any worker count") {
  const Dataset d = tc_test::two_cluster(30, 0.5, 3, 7);
  const auto roster = make_ensemble(default_roster());
  set_worker_count(1);
  const auto a = estimate_hardness(d, roster, kSmall);
  set_worker_count(4);
  const auto b = estimate_hardness(d, roster, kSmall);
  set_worker_count(1);
  CHECK(a.correct == b.correct);
}

TEST_CASE("hardness: planted ids are harder than clean ones") {
  const auto g = generate_two_cluster(50, 0.3, 5, 13);
  const auto h = estimate_hardness(g.data, make_ensemble(default_roster()), kSmall);
  double planted = 0, clean = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const bool is_planted = std::binary_search(g.detrimental_ids.begin(), g.detrimental_ids.end(), h.ids[i]);
    (is_planted ? planted : clean) += h.p_correct(i);
  }
  CHECK(planted / 10 < clean / 90);
}

TEST_CASE("hardness: errors") {
  const Dataset d = tc_test::skewed_dataset();
  CHECK_THROWS_AS(estimate_hardness(d, Ensemble{}), Error);
  const Dataset tiny = d.subset(std::vector<InstanceId>{0, 1, 90, 91});
  CHECK_THROWS_AS(estimate_hardness(tiny, Ensemble{stub()}), Error);
}

TEST_CASE("filter: strict threshold") {
  const Dataset d = tc_test::skewed_dataset();
  HardnessEstimate h;
  h.ids = d.ids();
  h.denominator = 2;
  for (const auto& inst : d.instances()) {
    h.labels.push_back(inst.label);
    h.correct.push_back(inst.id == 0 ? 0 : (inst.id == 1 ? 1 : 2));
  }
  const auto out = ensemble_filter(d, h, Ensemble{stub()}, 0.1);
  CHECK(out.removed_ids == std::vector<InstanceId>{0});
  const auto half = ensemble_filter(d, h, Ensemble{stub()}, 0.5);
  CHECK(half.removed_ids == std::vector<InstanceId>{0});  // p = 0.5 stays
  const auto one = ensemble_filter(d, h, Ensemble{stub()}, 1.0);
  CHECK(one.removed_ids == std::vector<InstanceId>{0, 1});
}

TEST_CASE("filter: nothing below threshold leaves the dataset unchanged") {
  const auto g = generate_two_cluster(20, 0.0, 0, 1);
  const auto out = ensemble_filter(g.data, Ensemble{knn(1)}, 0.9, kSmall);
  CHECK(out.removed_ids.empty());
  CHECK(out.retained == g.data);
}

TEST_CASE("filter: argument errors") {
  const Dataset d = tc_test::skewed_dataset();
  for (double phi : {0.0, -0.1, 1.5}) CHECK_THROWS_AS(ensemble_filter(d, Ensemble{stub()}, phi), Error);
  CHECK_THROWS_AS(ensemble_filter(d, Ensemble{}, 0.5), Error);
  try {
    ensemble_filter(d, Ensemble{std::make_shared<tc_test::WrongStub>(2)}, 0.5);
    FAIL("expected all_removed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::all_removed);
  }
}

TEST_CASE("filter: removed sets grow with phi") {
  const Dataset d = tc_test::two_cluster(40, 0.5, 4, 3);
  const auto h = estimate_hardness(d, make_ensemble(default_roster()), kSmall);
  std::vector<InstanceId> previous;
  for (double phi : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
    const auto removed = ensemble_filter(d, h, Ensemble{stub()}, phi).removed_ids;
    CHECK(std::includes(removed.begin(), removed.end(), previous.begin(), previous.end()));
    previous = removed;
  }
}

TEST_CASE("run_la: empty filter is plain CV; phi below resolution only drops never-correct instances") {
  const Dataset d = tc_test::two_cluster(30, 0.5, 3, 9);
  FilterContext ctx(d, kSmall);
  const auto target = knn();
  const double plain = cv_accuracy(*target, d, kSmall);
  CHECK(ctx.run_la(*target, {}, 0.5) == plain);
  const Ensemble filter{knn(1), make_learner(LearnerSpec::with_defaults(AlgorithmId::naive_bayes))};
  const double tiny = 1.0 / (filter.size() * kSmall.runs) * 0.99;
  const auto h = ctx.hardness(filter);
  std::vector<char> nonzero(d.size());
  bool any_zero = false;
  for (std::size_t i = 0; i < d.size(); ++i) {
    nonzero[i] = h.correct[i] > 0;
    any_zero = any_zero || h.correct[i] == 0;
  }
  CHECK(ctx.run_la(*target, filter, tiny) == ctx.masked_accuracy(*target, nonzero));
  if (!any_zero) CHECK(ctx.run_la(*target, filter, tiny) == plain);

  // Disjoint clusters: 1-NN never misses, so nothing sits below the resolution.
  const Dataset easy = tc_test::two_cluster(20, 0.0, 0, 3);
  FilterContext easy_ctx(easy, kSmall);
  CHECK(easy_ctx.run_la(*target, Ensemble{knn(1)}, 1.0 / kSmall.runs * 0.99) == easy_ctx.run_la(*target, {}, 1.0));
}

TEST_CASE("run_la: a constant target ignores filtering") {
  const Dataset d = tc_test::skewed_dataset();
  const tc_test::WrongStub always_zero(0);
  const Ensemble filter{knn(1), knn(3)};
  for (double phi : {0.1, 0.5, 1.0}) CHECK(run_la(d, always_zero, filter, phi) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("run_la: test folds are never filtered") {
  const Dataset d = tc_test::two_cluster(30, 0.5, 3, 4);
  FilterContext ctx(d, kSmall);
  const auto h = ctx.hardness(Ensemble{knn(1)});
  const auto mask = h.keep_mask(0.9);
  const auto preds = cross_validate(d, ctx.partition(), *knn(), kSmall.seed, &mask);
  CHECK(preds.predicted.size() == d.size() * kSmall.runs);
}

TEST_CASE("adaptive: no helpful candidate leaves F empty") {
  const Dataset d = tc_test::skewed_dataset();
  const auto out = adaptive_filter(d, *stub(), Ensemble{knn(1), knn(3)}, 0.5, kSmall);
  CHECK(out.ensemble.empty());
  CHECK(out.removed_ids.empty());
  REQUIRE(out.trace.size() == 1);
  CHECK(out.trace[0].accuracy == *out.baseline_accuracy);
  CHECK(*out.final_accuracy == *out.baseline_accuracy);
}

TEST_CASE("adaptive: trace increases strictly and never drops below the baseline") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const Dataset d = tc_test::two_cluster(30, 0.6, 3, seed);
    const auto out = adaptive_filter(d, *knn(1), make_ensemble(default_roster()), 0.5, kSmall);
    CHECK(*out.final_accuracy >= *out.baseline_accuracy);
    CHECK(out.trace.size() == out.ensemble.size() + 1);
    for (std::size_t i = 1; i < out.trace.size(); ++i) CHECK(out.trace[i].accuracy > out.trace[i - 1].accuracy);
    CHECK((out.ensemble.empty() == (*out.final_accuracy == *out.baseline_accuracy)));
  }
}

TEST_CASE("adaptive: a single helpful candidate is picked") {
  const auto g = generate_two_cluster(30, 0.3, 3, 21);
  const auto helper = make_learner(LearnerSpec::with_defaults(AlgorithmId::naive_bayes));
  const auto out = adaptive_filter(g.data, *knn(1), Ensemble{helper}, 0.5, kSmall);
  if (!out.ensemble.empty()) CHECK(out.trace.size() == 2);
  CHECK(out.trace.size() <= 2);
}

TEST_CASE("adaptive: planted-noise recovery on the two-cluster set") {
  const auto g = generate_two_cluster(40, 0.3, 4, 8);
  const auto out = adaptive_filter(g.data, *make_learner(LearnerSpec::with_defaults(AlgorithmId::knn)),
                                   make_ensemble(default_roster()), 0.5);
  CHECK(*out.final_accuracy >= *out.baseline_accuracy);
  int recovered = 0;
  for (auto id : g.detrimental_ids) recovered += std::binary_search(out.removed_ids.begin(), out.removed_ids.end(), id);
  CHECK(recovered >= 6);
}

TEST_CASE("exhaustive: separable set keeps everything") {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 8; ++i) {
    rows.push_back({i < 4 ? double(i) : 10.0 + i});
    labels.push_back(i < 4 ? 0 : 1);
  }
  const Dataset d = tc_test::numeric_dataset(rows, labels);
  const Protocol p{2, 4, 1};
  const auto best = exhaustive_best_subset(d, *knn(1), p);
  CHECK(best.ids == d.ids());
  CHECK(best.accuracy == 1.0);
}

TEST_CASE("exhaustive: a contradictory duplicate is excluded") {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 5; ++i) {
    rows.push_back({double(i)});
    labels.push_back(0);
    rows.push_back({20.0 + i});
    labels.push_back(1);
  }
  rows.push_back({2.0});  // copy of a class-0 point labelled 1
  labels.push_back(1);
  const Dataset d = tc_test::numeric_dataset(rows, labels);
  const Protocol p{1, 11, 5};  // leave-one-out
  const auto best = exhaustive_best_subset(d, *knn(1), p);
  CHECK(std::find(best.ids.begin(), best.ids.end(), InstanceId{10}) == best.ids.end());
  FilterContext ctx(d, p);
  CHECK(best.accuracy >= ctx.run_la(*knn(1), {}, 1.0));
}

TEST_CASE("exhaustive: single-class subsets are evaluated; cap enforced") {
  const Dataset d = tc_test::numeric_dataset({{0}, {1}, {2}, {10}, {11}, {12}}, {0, 0, 0, 1, 1, 1});
  const Protocol p{1, 3, 2};
  FilterContext ctx(d, p);
  // Feasible = every training split keeps at least one instance, whatever its class.
  std::size_t feasible = 0, single_class = 0;
  for (std::size_t bits = 1; bits < 64; ++bits) {
    bool ok = true;
    for (int f = 0; f < 3 && ok; ++f) {
      bool any = false;
      for (std::size_t i = 0; i < 6; ++i) any = any || (((bits >> i) & 1U) && ctx.partition().folds[0][i] != f);
      ok = any;
    }
    if (!ok) continue;
    ++feasible;
    single_class += (bits & 0x38U) == 0 || (bits & 0x7U) == 0;
  }
  CHECK(single_class > 0);
  CHECK(exhaustive_best_subset(ctx, *knn(1)).evaluated == feasible);
  CHECK_THROWS_AS(exhaustive_best_subset(tc_test::skewed_dataset(20, 10), *knn(1), Protocol{1, 2, 0}), Error);
}
