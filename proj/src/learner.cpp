#include "trainclean/learner.hpp"

#include "trainclean/error.hpp"
#include "trainclean/learners/algorithms.hpp"

namespace trainclean {

namespace {

class ConstantModel final : public ModelImpl {
 public:
  explicit ConstantModel(int label) : label_(label) {}
  int predict(std::span<const double>) const override { return label_; }

 private:
  int label_;
};

}  // namespace

TrainedModel::TrainedModel(std::string learner, std::size_t num_features, std::size_t num_classes,
                           std::shared_ptr<const ModelImpl> impl)
    : learner_(std::move(learner)), num_features_(num_features), num_classes_(num_classes), impl_(std::move(impl)) {}

int TrainedModel::predict(std::span<const double> values) const {
  if (values.size() != num_features_)
    throw Error(ErrorCode::schema_mismatch, "expected " + std::to_string(num_features_) + " values, got " +
                                                std::to_string(values.size()));
  return impl_->predict(values);
}

std::shared_ptr<const ModelImpl> constant_model(int label) { return std::make_shared<ConstantModel>(label); }

int argmax_present(std::span<const double> scores, std::span<const char> present) {
  int best = -1;
  for (std::size_t c = 0; c < scores.size(); ++c) {
    if (!present[c]) continue;
    if (best < 0 || scores[c] > scores[best]) best = static_cast<int>(c);
  }
  return best < 0 ? 0 : best;
}

AlgorithmLearner::AlgorithmLearner(LearnerSpec spec) : spec_(std::move(spec)) {
  spec_.params = hyperparameter_space(spec_.algorithm).resolve(spec_.params);
  key_ = to_string(spec_.algorithm) + spec_.params.to_json().dump();
}

std::string AlgorithmLearner::key() const { return key_; }

TrainedModel AlgorithmLearner::fit(const Dataset& data, std::uint64_t seed) const {
  if (data.empty()) throw Error(ErrorCode::empty_training_set, "cannot train on an empty dataset");
  const auto counts = data.class_counts();
  int present = 0;
  int only = 0;
  for (std::size_t c = 0; c < counts.size(); ++c)
    if (counts[c] > 0) {
      ++present;
      only = static_cast<int>(c);
    }
  auto impl = present == 1 ? constant_model(only) : learners::fit_algorithm(spec_.algorithm, spec_.params, data, seed);
  return TrainedModel(key_, data.num_features(), data.num_classes(), std::move(impl));
}

LearnerPtr make_learner(const LearnerSpec& spec) { return std::make_shared<AlgorithmLearner>(spec); }

Ensemble make_ensemble(const std::vector<LearnerSpec>& specs) {
  Ensemble out;
  out.reserve(specs.size());
  for (const auto& s : specs) out.push_back(make_learner(s));
  return out;
}

nlohmann::json describe(const Ensemble& ensemble) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& l : ensemble) j.push_back(l->describe());
  return j;
}

TrainedModel train(AlgorithmId algorithm, const Hyperparameters& params, const Dataset& data, std::uint64_t seed) {
  return AlgorithmLearner({algorithm, params}).fit(data, seed);
}

int predict(const TrainedModel& model, const Instance& instance) { return model.predict(instance); }

}  // namespace trainclean
