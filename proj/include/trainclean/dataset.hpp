#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace trainclean {

using InstanceId = std::uint64_t;

enum class FeatureKind { numeric, nominal };

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::numeric;
  std::vector<std::string> categories;  // nominal only, first-appearance order

  bool operator==(const FeatureSpec&) const = default;
};

/// A cell holds a numeric value, a category index (stored exactly as a double),
/// or the missing marker (NaN).
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double cell) { return std::isnan(cell); }

struct Instance {
  InstanceId id = 0;
  std::vector<double> values;
  int label = 0;
};

/// Immutable labelled table. Ids are unique and survive subsetting.
class Dataset {
 public:
  Dataset() = default;
  /// Validates every invariant; throws Error on violation. Requires >= 2 classes.
  Dataset(std::vector<FeatureSpec> features, std::vector<std::string> classes,
          std::vector<Instance> instances);

  const std::vector<FeatureSpec>& features() const { return features_; }
  const std::vector<std::string>& classes() const { return classes_; }
  const std::vector<Instance>& instances() const { return instances_; }

  std::size_t size() const { return instances_.size(); }
  bool empty() const { return instances_.empty(); }
  std::size_t num_features() const { return features_.size(); }
  std::size_t num_classes() const { return classes_.size(); }
  const Instance& operator[](std::size_t pos) const { return instances_[pos]; }

  std::vector<InstanceId> ids() const;
  std::optional<std::size_t> position_of(InstanceId id) const;
  /// Per-class instance counts indexed by class index.
  std::vector<std::size_t> class_counts() const;

  /// Restricts to keep_ids, preserving ids and instance order. Throws unknown_id.
  Dataset subset(std::span<const InstanceId> keep_ids) const;
  /// Restricts to the given positions (must be increasing); no validation beyond bounds.
  Dataset select(std::span<const std::size_t> positions) const;

  bool operator==(const Dataset& other) const;

 private:
  std::vector<FeatureSpec> features_;
  std::vector<std::string> classes_;
  std::vector<Instance> instances_;
  std::unordered_map<InstanceId, std::size_t> index_;
};

}  // namespace trainclean
