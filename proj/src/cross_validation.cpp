#include "trainclean/cross_validation.hpp"

#include "trainclean/error.hpp"
#include "trainclean/parallel.hpp"
#include "trainclean/random.hpp"

namespace trainclean {

nlohmann::json Protocol::to_json() const { return {{"runs", runs}, {"folds", folds}, {"seed", seed}}; }

Partition make_partition(const Dataset& data, const Protocol& protocol) {
  return stratified_partition(data, protocol.folds, protocol.runs, protocol.seed);
}

double CvPredictions::accuracy(const Dataset& data) const {
  // Every run scores all n instances, so the mean of per-run accuracies equals
  // the pooled fraction; pooling keeps equal totals bit-identical.
  std::size_t correct = 0;
  for (int r = 0; r < runs; ++r)
    for (std::size_t pos = 0; pos < n; ++pos) correct += at(r, pos) == data[pos].label;
  return static_cast<double>(correct) / (static_cast<double>(n) * runs);
}

std::vector<int> CvPredictions::correct_counts(const Dataset& data) const {
  std::vector<int> counts(n, 0);
  for (int r = 0; r < runs; ++r)
    for (std::size_t pos = 0; pos < n; ++pos) counts[pos] += at(r, pos) == data[pos].label;
  return counts;
}

CvPredictions cross_validate(const Dataset& data, const Partition& partition, const Learner& learner,
                             std::uint64_t seed, const std::vector<char>* train_mask) {
  const std::size_t n = data.size();
  if (partition.ids.size() != n) throw Error(ErrorCode::index_mismatch, "partition does not match the dataset");
  const int runs = partition.runs();
  const int k = partition.k;
  CvPredictions out{runs, n, std::vector<int>(static_cast<std::size_t>(runs) * n, 0)};
  parallel_for(static_cast<std::size_t>(runs * k), [&](std::size_t job) {
    const int r = static_cast<int>(job) / k;
    const int f = static_cast<int>(job) % k;
    const auto& folds = partition.folds[r];
    std::vector<std::size_t> train_pos;
    train_pos.reserve(n);
    for (std::size_t pos = 0; pos < n; ++pos)
      if (folds[pos] != f && (!train_mask || (*train_mask)[pos])) train_pos.push_back(pos);
    if (train_pos.empty())
      throw Error(ErrorCode::empty_training_set,
                  "training split of run " + std::to_string(r) + " fold " + std::to_string(f) + " is empty");
    const auto model =
        learner.fit(data.select(train_pos), derive_seed(seed, {static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(f)}));
    for (std::size_t pos = 0; pos < n; ++pos)
      if (folds[pos] == f) out.predicted[r * n + pos] = model.predict(data[pos]);
  });
  return out;
}

}  // namespace trainclean
