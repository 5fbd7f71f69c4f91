#include "trainclean/partition.hpp"

#include <algorithm>

#include "trainclean/error.hpp"
#include "trainclean/random.hpp"

namespace trainclean {

int Partition::fold_of(int run, InstanceId id) const {
  auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw Error(ErrorCode::unknown_id, "id " + std::to_string(id) + " is not partitioned");
  return folds.at(run)[static_cast<std::size_t>(it - ids.begin())];
}

Partition stratified_partition(const Dataset& data, int k, int runs, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::invalid_argument, "fold count must be at least 2");
  if (runs < 1) throw Error(ErrorCode::invalid_argument, "run count must be at least 1");
  if (static_cast<std::size_t>(k) > data.size())
    throw Error(ErrorCode::dataset_too_small, "cannot make " + std::to_string(k) + " folds from " +
                                                  std::to_string(data.size()) + " instances");
  Partition p;
  p.k = k;
  p.seed = seed;
  p.ids = data.ids();

  std::vector<std::vector<std::size_t>> by_class(data.num_classes());
  for (std::size_t pos = 0; pos < data.size(); ++pos) by_class[data[pos].label].push_back(pos);

  p.folds.assign(runs, std::vector<int>(data.size(), 0));
  for (int r = 0; r < runs; ++r) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(r)}));
    int cursor = 0;
    for (auto members : by_class) {
      rng.shuffle(std::span<std::size_t>(members));
      for (std::size_t pos : members) {
        p.folds[r][pos] = cursor;
        cursor = (cursor + 1) % k;
      }
    }
  }
  return p;
}

}  // namespace trainclean
