#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trainclean/cross_validation.hpp"
#include "trainclean/dataset.hpp"
#include "trainclean/learner.hpp"

namespace trainclean {

struct PredictionPoint {
  std::uint32_t dataset = 0;
  std::uint32_t run = 0;
  InstanceId instance = 0;
  bool operator==(const PredictionPoint&) const = default;
  auto operator<=>(const PredictionPoint&) const = default;
};

struct PredictionTable {
  std::vector<PredictionPoint> points;
  std::vector<int> labels;
};

/// Classifier output difference: fraction of points where the labels differ.
/// Throws index_mismatch if the point sets differ.
double cod(const PredictionTable& a, const PredictionTable& b);

struct CodMatrix {
  Ensemble learners;
  std::vector<std::vector<double>> d;
  nlohmann::json provenance = nlohmann::json::object();

  std::size_t size() const { return d.size(); }
};

/// CV predictions of every learner on every dataset (partition shared across
/// learners; dataset i uses protocol seed derive_seed(seed, {i})), pooled per pair.
/// A learner failing on a dataset drops that dataset from its pairs.
CodMatrix cod_matrix(const Ensemble& learners, const std::vector<Dataset>& corpus, const Protocol& protocol);

/// Matrix from precomputed distances (labels taken from the learners).
CodMatrix make_cod_matrix(Ensemble learners, std::vector<std::vector<double>> d);

enum class Linkage { single, complete, average };
Linkage parse_linkage(const std::string& name);
std::string to_string(Linkage linkage);

/// Node ids: leaves are 0..n-1, the i-th merge creates node n+i.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  double height = 0.0;
  std::size_t size = 0;
};

struct Dendrogram {
  std::size_t leaves = 0;
  std::vector<Merge> merges;

  /// Leaf indices under a node.
  std::vector<std::size_t> members(std::size_t node) const;
  nlohmann::json to_json() const;
};

/// Agglomerative clustering; equal-distance ties merge the pair whose clusters
/// have the smallest leftmost leaves (lexicographic).
Dendrogram agglomerate(const CodMatrix& matrix, Linkage linkage = Linkage::average);

/// Clusters = components after discarding merges above `height`; returns the
/// medoid of each cluster (ties toward roster order), ordered by roster position.
Ensemble cut_and_select(const Dendrogram& dendrogram, const CodMatrix& matrix, double height = 0.18);
std::vector<std::vector<std::size_t>> cut_clusters(const Dendrogram& dendrogram, double height);

}  // namespace trainclean
