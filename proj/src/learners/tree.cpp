#include "learners/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "learners/common.hpp"

namespace trainclean::learners {

namespace {

constexpr double kMinGain = 1e-10;

double entropy(const std::vector<double>& counts, double total) {
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : counts)
    if (c > 0.0) h -= c / total * std::log2(c / total);
  return h;
}

int majority(const std::vector<double>& counts, const std::vector<char>& present) {
  return argmax_present(counts, present);
}

/// Upper confidence bound on the extra errors of a leaf covering n instances with
/// e training errors (C4.5 error-based pruning).
double added_errors(double n, double e, double cf) {
  if (e < 1.0) {
    const double base = n * (1.0 - std::pow(cf, 1.0 / n));
    if (e == 0.0) return base;
    return base + e * (added_errors(n, 1.0, cf) - base);
  }
  if (e + 0.5 >= n) return std::max(n - e, 0.0);
  const double z = boost::math::quantile(boost::math::normal(), 1.0 - cf);
  const double f = (e + 0.5) / n;
  const double r = (f + z * z / (2 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4 * n * n))) / (1 + z * z / n);
  return r * n - e;
}

struct Split {
  double gain = kMinGain;
  int feature = -1;
  bool nominal = false;
  double threshold = 0.0;
};

}  // namespace

Tree::Tree(const Dataset& train, const std::vector<std::size_t>& positions, const TreeConfig& config, Rng& rng)
    : data_(&train), rng_(&rng), config_(config), present_(present_classes(train)) {
  std::vector<double> counts(train.num_classes(), 0.0);
  for (std::size_t p : positions) counts[train[p].label] += 1.0;
  build(positions, 0, majority(counts, present_));
  if (config_.prune) prune(0);
  data_ = nullptr;
  rng_ = nullptr;
}

int Tree::build(const std::vector<std::size_t>& positions, int depth, int parent_label) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  const std::size_t C = data_->num_classes();
  std::vector<double> counts(C, 0.0);
  for (std::size_t p : positions) counts[(*data_)[p].label] += 1.0;
  const double n = static_cast<double>(positions.size());
  {
    Node& node = nodes_[id];
    node.counts = counts;
    node.label = positions.empty() ? parent_label : majority(counts, present_);
  }
  const bool pure = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0; }) <= 1;
  if (pure || n < 2.0 * config_.min_leaf || (config_.max_depth && depth >= *config_.max_depth)) return id;

  const std::size_t d = data_->num_features();
  std::vector<std::size_t> candidates(d);
  std::iota(candidates.begin(), candidates.end(), 0);
  if (config_.sampling != FeatureSampling::all && d > 1) {
    const double target = config_.sampling == FeatureSampling::sqrt ? std::sqrt(static_cast<double>(d))
                                                                     : std::log2(static_cast<double>(d));
    const auto m = std::clamp<std::size_t>(static_cast<std::size_t>(target), 1, d);
    rng_->shuffle(std::span<std::size_t>(candidates));
    candidates.resize(m);
    std::sort(candidates.begin(), candidates.end());
  }

  const double min_leaf = config_.min_leaf;
  Split best;
  std::vector<std::size_t> known;
  known.reserve(positions.size());
  for (std::size_t f : candidates) {
    known.clear();
    for (std::size_t p : positions)
      if (!is_missing((*data_)[p].values[f])) known.push_back(p);
    if (known.size() < 2) continue;
    const double nk = static_cast<double>(known.size());
    std::vector<double> known_counts(C, 0.0);
    for (std::size_t p : known) known_counts[(*data_)[p].label] += 1.0;
    const double base = entropy(known_counts, nk);
    const double frac = nk / n;

    if (data_->features()[f].kind == FeatureKind::nominal) {
      const std::size_t K = data_->features()[f].categories.size();
      std::vector<std::vector<double>> branch(K, std::vector<double>(C, 0.0));
      std::vector<double> size(K, 0.0);
      for (std::size_t p : known) {
        const auto k = static_cast<std::size_t>((*data_)[p].values[f]);
        branch[k][(*data_)[p].label] += 1.0;
        size[k] += 1.0;
      }
      if (std::count_if(size.begin(), size.end(), [&](double s) { return s >= min_leaf; }) < 2) continue;
      double rest = 0.0;
      for (std::size_t k = 0; k < K; ++k) rest += size[k] / nk * entropy(branch[k], size[k]);
      const double gain = frac * (base - rest);
      if (gain > best.gain) best = {gain, static_cast<int>(f), true, 0.0};
      continue;
    }

    std::stable_sort(known.begin(), known.end(),
                     [&](std::size_t a, std::size_t b) { return (*data_)[a].values[f] < (*data_)[b].values[f]; });
    std::vector<double> left(C, 0.0), right = known_counts;
    for (std::size_t i = 0; i + 1 < known.size(); ++i) {
      const int label = (*data_)[known[i]].label;
      left[label] += 1.0;
      right[label] -= 1.0;
      const double a = (*data_)[known[i]].values[f];
      const double b = (*data_)[known[i + 1]].values[f];
      if (a == b) continue;
      const double nl = static_cast<double>(i + 1);
      const double nr = nk - nl;
      if (nl < min_leaf || nr < min_leaf) continue;
      const double gain = frac * (base - nl / nk * entropy(left, nl) - nr / nk * entropy(right, nr));
      if (gain > best.gain) best = {gain, static_cast<int>(f), false, a + (b - a) / 2.0};
    }
  }
  if (best.feature < 0) return id;

  const auto f = static_cast<std::size_t>(best.feature);
  const std::size_t branches = best.nominal ? data_->features()[f].categories.size() : 2;
  std::vector<std::vector<std::size_t>> parts(branches);
  std::vector<std::size_t> missing;
  for (std::size_t p : positions) {
    const double v = (*data_)[p].values[f];
    if (is_missing(v))
      missing.push_back(p);
    else if (best.nominal)
      parts[static_cast<std::size_t>(v)].push_back(p);
    else
      parts[v <= best.threshold ? 0 : 1].push_back(p);
  }
  std::size_t major = 0;
  for (std::size_t b = 1; b < branches; ++b)
    if (parts[b].size() > parts[major].size()) major = b;
  parts[major].insert(parts[major].end(), missing.begin(), missing.end());

  const int label = nodes_[id].label;
  std::vector<int> children;
  for (const auto& part : parts) children.push_back(build(part, depth + 1, label));
  Node& node = nodes_[id];
  node.leaf = false;
  node.feature = best.feature;
  node.nominal = best.nominal;
  node.threshold = best.threshold;
  node.children = std::move(children);
  node.majority_child = static_cast<int>(major);
  return id;
}

double Tree::prune(int id) {
  const double n = std::accumulate(nodes_[id].counts.begin(), nodes_[id].counts.end(), 0.0);
  if (n == 0.0) {
    nodes_[id].leaf = true;
    return 0.0;
  }
  const double e = n - *std::max_element(nodes_[id].counts.begin(), nodes_[id].counts.end());
  const double as_leaf = e + added_errors(n, e, config_.confidence);
  if (nodes_[id].leaf) return as_leaf;
  double as_subtree = 0.0;
  for (int child : nodes_[id].children) as_subtree += prune(child);
  if (as_leaf <= as_subtree + 0.1) {
    nodes_[id].leaf = true;
    nodes_[id].children.clear();
    return as_leaf;
  }
  return as_subtree;
}

int Tree::predict(std::span<const double> values) const {
  int id = 0;
  while (!nodes_[id].leaf) {
    const Node& node = nodes_[id];
    const double v = values[static_cast<std::size_t>(node.feature)];
    std::size_t branch;
    if (is_missing(v))
      branch = static_cast<std::size_t>(node.majority_child);
    else if (node.nominal)
      branch = static_cast<std::size_t>(v) < node.children.size() ? static_cast<std::size_t>(v)
                                                                  : static_cast<std::size_t>(node.majority_child);
    else
      branch = v <= node.threshold ? 0 : 1;
    id = node.children[branch];
  }
  return nodes_[id].label;
}

namespace {

class TreeModel final : public ModelImpl {
 public:
  TreeModel(const Dataset& train, const TreeConfig& config, std::uint64_t seed) : rng_(seed) {
    std::vector<std::size_t> positions(train.size());
    std::iota(positions.begin(), positions.end(), 0);
    tree_ = std::make_unique<Tree>(train, positions, config, rng_);
  }
  int predict(std::span<const double> values) const override { return tree_->predict(values); }

 private:
  Rng rng_;
  std::unique_ptr<Tree> tree_;
};

class ForestModel final : public ModelImpl {
 public:
  ForestModel(const Dataset& train, const ForestConfig& config, std::uint64_t seed)
      : num_classes_(train.num_classes()), present_(present_classes(train)) {
    for (int t = 0; t < config.trees; ++t) {
      Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(t)}));
      std::vector<std::size_t> positions(train.size());
      if (config.bootstrap)
        for (auto& p : positions) p = static_cast<std::size_t>(rng.below(train.size()));
      else
        std::iota(positions.begin(), positions.end(), 0);
      std::sort(positions.begin(), positions.end());
      trees_.emplace_back(std::make_unique<Tree>(train, positions, config.tree, rng));
    }
  }

  int predict(std::span<const double> values) const override {
    std::vector<double> votes(num_classes_, 0.0);
    for (const auto& tree : trees_) votes[tree->predict(values)] += 1.0;
    return argmax_present(votes, present_);
  }

 private:
  std::size_t num_classes_;
  std::vector<char> present_;
  std::vector<std::unique_ptr<Tree>> trees_;
};

}  // namespace

ModelPtr fit_tree(const Dataset& train, const TreeConfig& config, std::uint64_t seed) {
  return std::make_shared<TreeModel>(train, config, seed);
}

ModelPtr fit_forest(const Dataset& train, const ForestConfig& config, std::uint64_t seed) {
  return std::make_shared<ForestModel>(train, config, seed);
}

}  // namespace trainclean::learners
