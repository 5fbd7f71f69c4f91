#include "trainclean/diversity.hpp"

#include <algorithm>
#include <numeric>

#include "trainclean/error.hpp"
#include "trainclean/parallel.hpp"
#include "trainclean/random.hpp"

namespace trainclean {

double cod(const PredictionTable& a, const PredictionTable& b) {
  if (a.points != b.points || a.labels.size() != a.points.size() || b.labels.size() != b.points.size())
    throw Error(ErrorCode::index_mismatch, "prediction tables cover different points");
  if (a.points.empty()) throw Error(ErrorCode::index_mismatch, "prediction tables are empty");
  std::size_t differ = 0;
  for (std::size_t i = 0; i < a.labels.size(); ++i) differ += a.labels[i] != b.labels[i];
  return static_cast<double>(differ) / static_cast<double>(a.labels.size());
}

CodMatrix cod_matrix(const Ensemble& learners, const std::vector<Dataset>& corpus, const Protocol& protocol) {
  if (learners.size() < 2) throw Error(ErrorCode::invalid_argument, "COD needs at least two learners");
  if (corpus.empty()) throw Error(ErrorCode::invalid_argument, "COD needs a non-empty corpus");
  const std::size_t L = learners.size();
  const std::size_t D = corpus.size();

  std::vector<Protocol> protocols(D, protocol);
  std::vector<Partition> partitions;
  for (std::size_t d = 0; d < D; ++d) {
    protocols[d].seed = derive_seed(protocol.seed, {static_cast<std::uint64_t>(d)});
    partitions.push_back(make_partition(corpus[d], protocols[d]));
  }
  // tables[l][d]: predictions of learner l on dataset d, empty on failure.
  std::vector<std::vector<std::optional<CvPredictions>>> tables(L, std::vector<std::optional<CvPredictions>>(D));
  std::vector<std::vector<std::string>> failures(L, std::vector<std::string>(D));
  parallel_for(L * D, [&](std::size_t job) {
    const std::size_t l = job / D, d = job % D;
    try {
      tables[l][d] = cross_validate(corpus[d], partitions[d], *learners[l], protocols[d].seed);
    } catch (const std::exception& e) {
      failures[l][d] = e.what();
    }
  });

  CodMatrix m;
  m.learners = learners;
  m.d.assign(L, std::vector<double>(L, 0.0));
  nlohmann::json excluded = nlohmann::json::array();
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t d = 0; d < D; ++d)
      if (!tables[l][d]) excluded.push_back({{"learner", l}, {"dataset", d}, {"error", failures[l][d]}});
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = i + 1; j < L; ++j) {
      std::size_t differ = 0, total = 0;
      for (std::size_t d = 0; d < D; ++d) {
        if (!tables[i][d] || !tables[j][d]) continue;
        const auto& a = tables[i][d]->predicted;
        const auto& b = tables[j][d]->predicted;
        for (std::size_t p = 0; p < a.size(); ++p) differ += a[p] != b[p];
        total += a.size();
      }
      m.d[i][j] = m.d[j][i] = total ? static_cast<double>(differ) / static_cast<double>(total) : 1.0;
    }
  nlohmann::json sizes = nlohmann::json::array();
  for (const auto& data : corpus) sizes.push_back(data.size());
  m.provenance = {{"datasets", sizes}, {"protocol", protocol.to_json()}, {"excluded", excluded}};
  return m;
}

CodMatrix make_cod_matrix(Ensemble learners, std::vector<std::vector<double>> d) {
  const std::size_t n = learners.size();
  if (d.size() != n) throw Error(ErrorCode::invalid_argument, "matrix size does not match the learner list");
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i].size() != n || d[i][i] != 0.0) throw Error(ErrorCode::invalid_argument, "malformed COD matrix");
    for (std::size_t j = 0; j < n; ++j)
      if (d[i][j] != d[j][i] || d[i][j] < 0.0 || d[i][j] > 1.0)
        throw Error(ErrorCode::invalid_argument, "COD matrix must be symmetric with entries in [0,1]");
  }
  CodMatrix m;
  m.learners = std::move(learners);
  m.d = std::move(d);
  return m;
}

Linkage parse_linkage(const std::string& name) {
  if (name == "single") return Linkage::single;
  if (name == "complete") return Linkage::complete;
  if (name == "average") return Linkage::average;
  throw Error(ErrorCode::invalid_argument, "unknown linkage '" + name + "'");
}

std::string to_string(Linkage linkage) {
  switch (linkage) {
    case Linkage::single: return "single";
    case Linkage::complete: return "complete";
    case Linkage::average: return "average";
  }
  return "average";
}

std::vector<std::size_t> Dendrogram::members(std::size_t node) const {
  if (node < leaves) return {node};
  const Merge& m = merges.at(node - leaves);
  auto out = members(m.left);
  auto right = members(m.right);
  out.insert(out.end(), right.begin(), right.end());
  std::sort(out.begin(), out.end());
  return out;
}

nlohmann::json Dendrogram::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& m : merges) j.push_back({{"left", m.left}, {"right", m.right}, {"height", m.height}, {"size", m.size}});
  return {{"leaves", leaves}, {"merges", j}};
}

Dendrogram agglomerate(const CodMatrix& matrix, Linkage linkage) {
  const std::size_t n = matrix.size();
  if (n < 2) throw Error(ErrorCode::invalid_argument, "clustering needs at least two learners");
  struct Cluster {
    std::size_t node;
    std::vector<std::size_t> members;  // sorted leaf indices
  };
  std::vector<Cluster> active;
  for (std::size_t i = 0; i < n; ++i) active.push_back({i, {i}});

  auto distance = [&](const Cluster& a, const Cluster& b) {
    double best = linkage == Linkage::single ? INFINITY : (linkage == Linkage::complete ? -INFINITY : 0.0);
    for (std::size_t i : a.members)
      for (std::size_t j : b.members) {
        const double v = matrix.d[i][j];
        if (linkage == Linkage::single)
          best = std::min(best, v);
        else if (linkage == Linkage::complete)
          best = std::max(best, v);
        else
          best += v;
      }
    if (linkage == Linkage::average) best /= static_cast<double>(a.members.size() * b.members.size());
    return best;
  };

  Dendrogram out;
  out.leaves = n;
  while (active.size() > 1) {
    // active stays ordered by leftmost leaf, so the first minimum found in
    // (i, j) order is the lexicographically smallest pair.
    std::size_t bi = 0, bj = 1;
    double best = distance(active[0], active[1]);
    for (std::size_t i = 0; i < active.size(); ++i)
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        const double v = distance(active[i], active[j]);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    Cluster merged{n + out.merges.size(), active[bi].members};
    merged.members.insert(merged.members.end(), active[bj].members.begin(), active[bj].members.end());
    std::sort(merged.members.begin(), merged.members.end());
    out.merges.push_back({active[bi].node, active[bj].node, best, merged.members.size()});
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
    active[bi] = std::move(merged);
    std::sort(active.begin(), active.end(),
              [](const Cluster& a, const Cluster& b) { return a.members.front() < b.members.front(); });
  }
  return out;
}

std::vector<std::vector<std::size_t>> cut_clusters(const Dendrogram& dendrogram, double height) {
  const std::size_t n = dendrogram.leaves;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t m = 0; m < dendrogram.merges.size(); ++m) {
    const Merge& merge = dendrogram.merges[m];
    if (merge.height > height) continue;
    const auto leaves = dendrogram.members(n + m);
    for (std::size_t leaf : leaves) {
      const std::size_t a = find(leaves.front()), b = find(leaf);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<long> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<long>(clusters.size());
      clusters.emplace_back();
    }
    clusters[static_cast<std::size_t>(slot[root])].push_back(i);
  }
  return clusters;
}

Ensemble cut_and_select(const Dendrogram& dendrogram, const CodMatrix& matrix, double height) {
  if (height < 0.0) throw Error(ErrorCode::invalid_argument, "cut height must be non-negative");
  if (dendrogram.leaves != matrix.size()) throw Error(ErrorCode::index_mismatch, "dendrogram does not match the matrix");
  Ensemble selected;
  for (const auto& cluster : cut_clusters(dendrogram, height)) {
    std::size_t medoid = cluster.front();
    double best = INFINITY;
    for (std::size_t candidate : cluster) {
      double sum = 0.0;
      for (std::size_t other : cluster) sum += matrix.d[candidate][other];
      if (sum < best) {
        best = sum;
        medoid = candidate;
      }
    }
    selected.push_back(matrix.learners[medoid]);
  }
  return selected;
}

}  // namespace trainclean
