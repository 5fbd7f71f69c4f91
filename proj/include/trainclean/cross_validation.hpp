#pragma once

#include <cstdint>
#include <vector>

#include "trainclean/dataset.hpp"
#include "trainclean/learner.hpp"
#include "trainclean/partition.hpp"

namespace trainclean {

/// Repeated stratified k-fold protocol; the paper default is 5 x 10.
struct Protocol {
  int runs = 5;
  int folds = 10;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  bool operator==(const Protocol&) const = default;
};

Partition make_partition(const Dataset& data, const Protocol& protocol);

/// Held-out predictions: predicted[r * n + pos] for run r and dataset position pos.
struct CvPredictions {
  int runs = 0;
  std::size_t n = 0;
  std::vector<int> predicted;

  int at(int run, std::size_t pos) const { return predicted[run * n + pos]; }
  /// Mean over runs of the per-run accuracy.
  double accuracy(const Dataset& data) const;
  /// Number of runs in which each position was predicted correctly.
  std::vector<int> correct_counts(const Dataset& data) const;
};

/// Trains on every (run, fold) training split and predicts the held-out fold.
/// When train_mask is given, training splits keep only positions with a non-zero
/// mask; test folds are never filtered. Model seeds are derive_seed(seed, {run, fold}),
/// independent of the learner, so identical learners give identical predictions.
/// Throws empty_training_set if a filtered training split is empty.
CvPredictions cross_validate(const Dataset& data, const Partition& partition, const Learner& learner,
                             std::uint64_t seed, const std::vector<char>* train_mask = nullptr);

}  // namespace trainclean
