#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trainclean/dataset.hpp"
#include "trainclean/hyperparameters.hpp"

namespace trainclean {

/// Learned state of one algorithm. Implementations only ever see feature vectors
/// that already passed the schema check in TrainedModel::predict.
class ModelImpl {
 public:
  virtual ~ModelImpl() = default;
  virtual int predict(std::span<const double> values) const = 0;
};

/// Immutable hypothesis h = g(T, lambda).
class TrainedModel {
 public:
  TrainedModel(std::string learner, std::size_t num_features, std::size_t num_classes,
               std::shared_ptr<const ModelImpl> impl);

  const std::string& learner() const { return learner_; }
  std::size_t num_features() const { return num_features_; }
  std::size_t num_classes() const { return num_classes_; }

  /// Throws schema_mismatch when the value vector has the wrong width.
  int predict(std::span<const double> values) const;
  int predict(const Instance& instance) const { return predict(instance.values); }

 private:
  std::string learner_;
  std::size_t num_features_;
  std::size_t num_classes_;
  std::shared_ptr<const ModelImpl> impl_;
};

/// Anything that can be trained under the cross-validation protocols. The key
/// identifies the learner (algorithm and parameters) for caching and reporting.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual std::string key() const = 0;
  virtual nlohmann::json describe() const = 0;
  /// Throws empty_training_set on an empty dataset. A training set holding a
  /// single class yields the constant classifier for that class.
  virtual TrainedModel fit(const Dataset& train, std::uint64_t seed) const = 0;
};

using LearnerPtr = std::shared_ptr<const Learner>;
using Ensemble = std::vector<LearnerPtr>;

/// Learner backed by one of the built-in algorithms.
class AlgorithmLearner final : public Learner {
 public:
  explicit AlgorithmLearner(LearnerSpec spec);

  const LearnerSpec& spec() const { return spec_; }
  std::string key() const override;
  nlohmann::json describe() const override { return spec_.to_json(); }
  TrainedModel fit(const Dataset& train, std::uint64_t seed) const override;

 private:
  LearnerSpec spec_;
  std::string key_;
};

LearnerPtr make_learner(const LearnerSpec& spec);
Ensemble make_ensemble(const std::vector<LearnerSpec>& specs);
nlohmann::json describe(const Ensemble& ensemble);

TrainedModel train(AlgorithmId algorithm, const Hyperparameters& params, const Dataset& train,
                   std::uint64_t seed);
int predict(const TrainedModel& model, const Instance& instance);

/// Constant classifier; used for degenerate training sets.
std::shared_ptr<const ModelImpl> constant_model(int label);

/// Index of the largest count/score among classes flagged present; ties go to
/// the lower index. Falls back to 0 when nothing is present.
int argmax_present(std::span<const double> scores, std::span<const char> present);

}  // namespace trainclean
