#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "trainclean/dataset.hpp"
#include "trainclean/learners/algorithms.hpp"
#include "trainclean/random.hpp"

namespace trainclean::learners {

class Tree {
 public:
  /// Grows on the instances at `positions` (duplicates allowed, as in bootstrap samples).
  Tree(const Dataset& train, const std::vector<std::size_t>& positions, const TreeConfig& config, Rng& rng);

  int predict(std::span<const double> values) const;
  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    bool leaf = true;
    int label = 0;
    std::vector<double> counts;
    int feature = -1;
    bool nominal = false;
    double threshold = 0.0;
    std::vector<int> children;
    int majority_child = 0;
  };

  int build(const std::vector<std::size_t>& positions, int depth, int parent_label);
  double prune(int node);

  // Only valid while growing.
  const Dataset* data_;
  Rng* rng_;
  TreeConfig config_;
  std::vector<char> present_;
  std::vector<Node> nodes_;
};

}  // namespace trainclean::learners
