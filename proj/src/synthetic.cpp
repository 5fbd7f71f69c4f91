#include "trainclean/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "trainclean/error.hpp"
#include "trainclean/random.hpp"

namespace trainclean {

namespace {

constexpr double kSeparation = 10.0;
constexpr double kTruncation = 2.5;

double truncated_normal(Rng& rng) {
  double z;
  do {
    z = rng.normal();
  } while (std::abs(z) > kTruncation);
  return z;
}

std::vector<std::size_t> choose(Rng& rng, std::size_t n, std::size_t count) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  rng.shuffle(std::span<std::size_t>(idx));
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

GeneratedDataset generate_two_cluster(int n_per_class, double overlap, int n_detrimental, std::uint64_t seed) {
  if (n_per_class < 1) throw Error(ErrorCode::invalid_argument, "n_per_class must be positive");
  if (overlap < 0.0 || overlap > 1.0) throw Error(ErrorCode::invalid_argument, "overlap must lie in [0,1]");
  if (n_detrimental < 0 || n_detrimental > n_per_class)
    throw Error(ErrorCode::invalid_argument, "n_detrimental must lie in [0, n_per_class]");

  Rng rng(derive_seed(seed, {tag("two-cluster")}));
  // Spread 1 keeps the truncated clusters disjoint; overlap 1 makes them cover
  // each other's centres.
  const double sigma = 1.0 + overlap * (kSeparation / kTruncation - 1.0) * 1.2;
  std::vector<Instance> instances;
  std::vector<InstanceId> detrimental;
  for (int cls = 0; cls < 2; ++cls) {
    const double cx = cls == 0 ? 0.0 : kSeparation;
    const auto flipped = choose(rng, static_cast<std::size_t>(n_per_class), static_cast<std::size_t>(n_detrimental));
    for (int i = 0; i < n_per_class; ++i) {
      const bool is_flipped = std::binary_search(flipped.begin(), flipped.end(), static_cast<std::size_t>(i));
      const double scale = is_flipped ? 0.5 * sigma : sigma;
      const double x = cx + scale * truncated_normal(rng);
      const double y = scale * truncated_normal(rng);
      const InstanceId id = instances.size();
      instances.push_back({id, {x, y}, is_flipped ? 1 - cls : cls});
      if (is_flipped) detrimental.push_back(id);
    }
  }
  std::vector<FeatureSpec> features{{"x", FeatureKind::numeric, {}}, {"y", FeatureKind::numeric, {}}};
  return {Dataset(std::move(features), {"A", "B"}, std::move(instances)), std::move(detrimental)};
}

GeneratedDataset generate_mixture(const MixtureOptions& o, std::uint64_t seed) {
  if (o.n_classes < 2 || o.n_instances < o.n_classes || o.modes_per_class < 1 || o.n_numeric + o.n_nominal < 1 ||
      o.label_noise < 0.0 || o.label_noise >= 1.0 || o.spread <= 0.0)
    throw Error(ErrorCode::invalid_argument, "invalid mixture options");
  Rng rng(derive_seed(seed, {tag("mixture")}));

  const int modes = o.n_classes * o.modes_per_class;
  std::vector<std::vector<double>> centres(modes, std::vector<double>(o.n_numeric));
  for (auto& c : centres)
    for (auto& v : c) v = rng.uniform(-4.0, 4.0);
  constexpr int kCategories = 3;
  // Per class and nominal feature: a skewed categorical distribution.
  std::vector<std::vector<std::vector<double>>> cat_probs(
      o.n_classes, std::vector<std::vector<double>>(o.n_nominal, std::vector<double>(kCategories)));
  for (auto& per_class : cat_probs)
    for (auto& probs : per_class) {
      double total = 0.0;
      for (auto& p : probs) total += (p = -std::log(1.0 - rng.uniform()) + 0.05);
      for (auto& p : probs) p /= total;
    }

  std::vector<Instance> instances;
  instances.reserve(o.n_instances);
  for (int i = 0; i < o.n_instances; ++i) {
    const int cls = i % o.n_classes;
    const int mode = cls * o.modes_per_class + static_cast<int>(rng.below(o.modes_per_class));
    Instance inst{static_cast<InstanceId>(i), {}, cls};
    for (int f = 0; f < o.n_numeric; ++f) inst.values.push_back(centres[mode][f] + o.spread * rng.normal());
    for (int f = 0; f < o.n_nominal; ++f) {
      double u = rng.uniform();
      int c = 0;
      while (c + 1 < kCategories && u >= cat_probs[cls][f][c]) u -= cat_probs[cls][f][c++];
      inst.values.push_back(c);
    }
    instances.push_back(std::move(inst));
  }

  const auto n_noisy = static_cast<std::size_t>(std::lround(o.label_noise * o.n_instances));
  std::vector<InstanceId> noisy;
  for (std::size_t pos : choose(rng, instances.size(), n_noisy)) {
    auto& inst = instances[pos];
    inst.label = (inst.label + 1 + static_cast<int>(rng.below(o.n_classes - 1))) % o.n_classes;
    noisy.push_back(inst.id);
  }

  std::vector<FeatureSpec> features;
  for (int f = 0; f < o.n_numeric; ++f) features.push_back({"num" + std::to_string(f), FeatureKind::numeric, {}});
  for (int f = 0; f < o.n_nominal; ++f)
    features.push_back({"cat" + std::to_string(f), FeatureKind::nominal, {"u", "v", "w"}});
  std::vector<std::string> classes;
  for (int c = 0; c < o.n_classes; ++c) classes.push_back("c" + std::to_string(c));
  return {Dataset(std::move(features), std::move(classes), std::move(instances)), std::move(noisy)};
}

std::vector<CorpusEntry> benchmark_corpus(std::uint64_t seed) {
  std::vector<CorpusEntry> corpus;
  corpus.push_back({"two_cluster", generate_two_cluster(100, 0.35, 10, derive_seed(seed, {1}))});

  MixtureOptions xor_like;
  xor_like.n_instances = 240;
  xor_like.n_numeric = 2;
  xor_like.modes_per_class = 2;
  xor_like.spread = 1.0;
  corpus.push_back({"bimodal_2d", generate_mixture(xor_like, derive_seed(seed, {2}))});

  MixtureOptions three_class;
  three_class.n_instances = 210;
  three_class.n_classes = 3;
  three_class.n_numeric = 4;
  three_class.spread = 1.5;
  corpus.push_back({"three_class", generate_mixture(three_class, derive_seed(seed, {3}))});

  MixtureOptions mixed;
  mixed.n_instances = 200;
  mixed.n_numeric = 2;
  mixed.n_nominal = 3;
  mixed.spread = 1.5;
  corpus.push_back({"mixed_types", generate_mixture(mixed, derive_seed(seed, {4}))});

  MixtureOptions multimodal;
  multimodal.n_instances = 240;
  multimodal.n_numeric = 3;
  multimodal.modes_per_class = 3;
  multimodal.spread = 0.9;
  corpus.push_back({"multimodal", generate_mixture(multimodal, derive_seed(seed, {5}))});
  return corpus;
}

}  // namespace trainclean
