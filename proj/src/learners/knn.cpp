#include <algorithm>

#include "learners/common.hpp"
#include "trainclean/learners/algorithms.hpp"

namespace trainclean::learners {

namespace {

struct Memory {
  explicit Memory(const Dataset& train) : distance(train), present(present_classes(train)) {
    rows.reserve(train.size());
    for (const auto& inst : train.instances()) {
      rows.push_back(inst.values);
      labels.push_back(inst.label);
    }
  }
  MixedDistance distance;
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::vector<char> present;
};

class KnnModel final : public ModelImpl {
 public:
  KnnModel(const Dataset& train, KnnConfig config) : memory_(train), config_(config) {}

  int predict(std::span<const double> values) const override {
    const auto neighbours = nearest(memory_.distance, memory_.rows, values, static_cast<std::size_t>(config_.k));
    std::vector<double> votes(memory_.present.size(), 0.0);
    for (const auto& n : neighbours)
      votes[memory_.labels[n.index]] += config_.inverse_distance ? 1.0 / std::max(n.distance, 1e-12) : 1.0;
    return argmax_present(votes, memory_.present);
  }

 private:
  Memory memory_;
  KnnConfig config_;
};

class LocallyWeightedModel final : public ModelImpl {
 public:
  LocallyWeightedModel(const Dataset& train, LocallyWeightedConfig config) : memory_(train), config_(config) {}

  int predict(std::span<const double> values) const override {
    const auto neighbours =
        nearest(memory_.distance, memory_.rows, values, static_cast<std::size_t>(config_.neighborhood));
    const double bandwidth = neighbours.empty() ? 0.0 : neighbours.back().distance;
    std::vector<double> votes(memory_.present.size(), 0.0);
    for (const auto& n : neighbours) {
      const double u = bandwidth > 0.0 ? n.distance / bandwidth : 0.0;
      const double w = config_.linear_kernel ? std::max(0.0, 1.0001 - u) : 1.0 / (0.001 + u);
      votes[memory_.labels[n.index]] += w;
    }
    return argmax_present(votes, memory_.present);
  }

 private:
  Memory memory_;
  LocallyWeightedConfig config_;
};

}  // namespace

ModelPtr fit_knn(const Dataset& train, const KnnConfig& config) { return std::make_shared<KnnModel>(train, config); }

ModelPtr fit_locally_weighted(const Dataset& train, const LocallyWeightedConfig& config) {
  return std::make_shared<LocallyWeightedModel>(train, config);
}

}  // namespace trainclean::learners
