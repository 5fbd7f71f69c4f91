#pragma once

// Helpers shared by the unit and acceptance tests: stub learners with known
// behaviour and small hand-built datasets.

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "trainclean/trainclean.hpp"

namespace tc_test {

using namespace trainclean;

/// Always predicts a fixed class index.
class FixedModel final : public ModelImpl {
 public:
  explicit FixedModel(int label) : label_(label) {}
  int predict(std::span<const double>) const override { return label_; }

 private:
  int label_;
};

/// Predicts the training set's majority class (minority when `invert` is set).
/// Ties go to the lower class index.
class ConstantStub final : public Learner {
 public:
  explicit ConstantStub(bool invert = false, std::string name = "") : invert_(invert), name_(std::move(name)) {}

  std::string key() const override { return "stub:" + std::string(invert_ ? "minority" : "majority") + name_; }
  nlohmann::json describe() const override { return {{"algorithm", invert_ ? "stub-minority" : "stub-majority"}}; }

  TrainedModel fit(const Dataset& train, std::uint64_t) const override {
    if (train.empty()) throw Error(ErrorCode::empty_training_set, "empty training set");
    const auto counts = train.class_counts();
    int pick = -1;
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (counts[c] == 0) continue;
      if (pick < 0 || (invert_ ? counts[c] < counts[pick] : counts[c] > counts[pick])) pick = static_cast<int>(c);
    }
    return TrainedModel(key(), train.num_features(), train.num_classes(), std::make_shared<FixedModel>(pick));
  }

 private:
  bool invert_;
  std::string name_;
};

/// Always predicts class `label`, whatever it was trained on.
class WrongStub final : public Learner {
 public:
  explicit WrongStub(int label) : label_(label) {}
  std::string key() const override { return "stub:fixed" + std::to_string(label_); }
  nlohmann::json describe() const override { return {{"algorithm", "stub-fixed"}}; }
  TrainedModel fit(const Dataset& train, std::uint64_t) const override {
    if (train.empty()) throw Error(ErrorCode::empty_training_set, "empty training set");
    return TrainedModel(key(), train.num_features(), train.num_classes(), std::make_shared<FixedModel>(label_));
  }

 private:
  int label_;
};

/// Wrong on every instance of `truth`: looks each probe up by its feature
/// vector and answers the next class.
class AlwaysWrongStub final : public Learner {
 public:
  explicit AlwaysWrongStub(const Dataset& truth) {
    for (const auto& inst : truth.instances()) labels_.emplace_back(inst.values, inst.label);
    classes_ = static_cast<int>(truth.num_classes());
  }
  std::string key() const override { return "stub:always-wrong"; }
  nlohmann::json describe() const override { return {{"algorithm", "stub-always-wrong"}}; }
  TrainedModel fit(const Dataset& train, std::uint64_t) const override {
    if (train.empty()) throw Error(ErrorCode::empty_training_set, "empty training set");
    return TrainedModel(key(), train.num_features(), train.num_classes(), std::make_shared<Model>(labels_, classes_));
  }

 private:
  using Table = std::vector<std::pair<std::vector<double>, int>>;
  class Model final : public ModelImpl {
   public:
    Model(const Table& labels, int classes) : labels_(labels), classes_(classes) {}
    int predict(std::span<const double> values) const override {
      for (const auto& [row, label] : labels_)
        if (std::equal(row.begin(), row.end(), values.begin(), values.end())) return (label + 1) % classes_;
      return 0;
    }

   private:
    Table labels_;
    int classes_;
  };
  Table labels_;
  int classes_ = 2;
};

/// One numeric feature; labels given as class indices over {"a", "b", ...}.
inline Dataset numeric_dataset(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
                               int n_classes = 2) {
  std::vector<FeatureSpec> features;
  for (std::size_t f = 0; f < rows.front().size(); ++f)
    features.push_back({"x" + std::to_string(f), FeatureKind::numeric, {}});
  std::vector<std::string> classes;
  for (int c = 0; c < n_classes; ++c) classes.push_back(std::string(1, static_cast<char>('a' + c)));
  std::vector<Instance> instances;
  for (std::size_t i = 0; i < rows.size(); ++i) instances.push_back({i, rows[i], labels[i]});
  return Dataset(features, classes, instances);
}

/// n instances, the first `majority` of class 0 and the rest of class 1.
inline Dataset skewed_dataset(int n = 100, int majority = 90) {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < n; ++i) {
    rows.push_back({static_cast<double>(i)});
    labels.push_back(i < majority ? 0 : 1);
  }
  return numeric_dataset(rows, labels);
}

inline Dataset two_cluster(int n_per_class, double overlap, int n_detrimental, std::uint64_t seed) {
  return generate_two_cluster(n_per_class, overlap, n_detrimental, seed).data;
}

inline LearnerPtr stub(bool invert = false) { return std::make_shared<ConstantStub>(invert); }

}  // namespace tc_test
