#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trainclean/dataset.hpp"

namespace trainclean {

struct GeneratedDataset {
  Dataset data;
  std::vector<InstanceId> detrimental_ids;  // sorted
};

/// Two 2-D clusters (class "A" around the origin, class "B" shifted along x).
/// overlap in [0,1] scales the cluster spread relative to the separation; at 0 the
/// clusters are disjoint. n_detrimental instances per class are relabelled to the
/// other class and scattered at half the cluster spread around their original centre.
GeneratedDataset generate_two_cluster(int n_per_class, double overlap, int n_detrimental,
                                      std::uint64_t seed);

/// Benchmark family used for the bundled corpus: Gaussian mixtures with several
/// modes per class, optional nominal features and uniform label noise.
struct MixtureOptions {
  int n_instances = 200;
  int n_classes = 2;
  int n_numeric = 4;
  int n_nominal = 0;
  int modes_per_class = 1;
  double spread = 1.0;
  double label_noise = 0.1;
};
GeneratedDataset generate_mixture(const MixtureOptions& options, std::uint64_t seed);

struct CorpusEntry {
  std::string name;
  GeneratedDataset dataset;
};
/// The fixed set of small noisy datasets shipped under data/corpus.
std::vector<CorpusEntry> benchmark_corpus(std::uint64_t seed = 2014);

}  // namespace trainclean
