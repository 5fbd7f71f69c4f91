#pragma once

#include <cstdint>
#include <vector>

#include "trainclean/dataset.hpp"

namespace trainclean {

/// Repeated k-fold assignment. folds[r][pos] is the fold of the instance at
/// position pos (dataset order) in run r.
struct Partition {
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<InstanceId> ids;
  std::vector<std::vector<int>> folds;

  int runs() const { return static_cast<int>(folds.size()); }
  int fold_of(int run, InstanceId id) const;

  bool operator==(const Partition&) const = default;
};

/// Stratified repeated partition. Per run r the stream is derive_seed(seed, {r});
/// each class's ids are shuffled and dealt round-robin, continuing the fold cursor
/// from the previous class so fold sizes stay balanced.
Partition stratified_partition(const Dataset& data, int k, int runs, std::uint64_t seed);

}  // namespace trainclean
