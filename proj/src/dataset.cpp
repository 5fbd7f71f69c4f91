#include "trainclean/dataset.hpp"

#include <set>

#include "trainclean/error.hpp"

namespace trainclean {

Dataset::Dataset(std::vector<FeatureSpec> features, std::vector<std::string> classes,
                 std::vector<Instance> instances)
    : features_(std::move(features)), classes_(std::move(classes)), instances_(std::move(instances)) {
  if (classes_.size() < 2)
    throw Error(ErrorCode::single_class, "a dataset needs at least two classes");
  if (std::set<std::string>(classes_.begin(), classes_.end()).size() != classes_.size())
    throw Error(ErrorCode::parse, "duplicate class name");
  for (const auto& f : features_) {
    if (f.kind == FeatureKind::nominal) {
      if (f.categories.empty())
        throw Error(ErrorCode::parse, "nominal feature '" + f.name + "' has no categories");
      if (std::set<std::string>(f.categories.begin(), f.categories.end()).size() != f.categories.size())
        throw Error(ErrorCode::parse, "nominal feature '" + f.name + "' has duplicate categories");
    } else if (!f.categories.empty()) {
      throw Error(ErrorCode::parse, "numeric feature '" + f.name + "' declares categories");
    }
  }
  index_.reserve(instances_.size());
  for (std::size_t pos = 0; pos < instances_.size(); ++pos) {
    const Instance& inst = instances_[pos];
    if (inst.values.size() != features_.size())
      throw Error(ErrorCode::ragged_rows, "instance " + std::to_string(inst.id) + " has " +
                                              std::to_string(inst.values.size()) + " values, expected " +
                                              std::to_string(features_.size()));
    if (inst.label < 0 || static_cast<std::size_t>(inst.label) >= classes_.size())
      throw Error(ErrorCode::missing_class, "instance " + std::to_string(inst.id) + " has an invalid label");
    for (std::size_t f = 0; f < features_.size(); ++f) {
      const double v = inst.values[f];
      if (features_[f].kind != FeatureKind::nominal || is_missing(v)) continue;
      if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)) ||
          static_cast<std::size_t>(v) >= features_[f].categories.size())
        throw Error(ErrorCode::undeclared_value,
                    "instance " + std::to_string(inst.id) + " has an invalid category for '" + features_[f].name + "'");
    }
    if (!index_.emplace(inst.id, pos).second)
      throw Error(ErrorCode::invalid_argument, "duplicate instance id " + std::to_string(inst.id));
  }
}

std::vector<InstanceId> Dataset::ids() const {
  std::vector<InstanceId> out;
  out.reserve(instances_.size());
  for (const auto& inst : instances_) out.push_back(inst.id);
  return out;
}

std::optional<std::size_t> Dataset::position_of(InstanceId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(classes_.size(), 0);
  for (const auto& inst : instances_) ++counts[inst.label];
  return counts;
}

Dataset Dataset::subset(std::span<const InstanceId> keep_ids) const {
  std::vector<char> keep(instances_.size(), 0);
  for (InstanceId id : keep_ids) {
    auto pos = position_of(id);
    if (!pos) throw Error(ErrorCode::unknown_id, "unknown instance id " + std::to_string(id));
    keep[*pos] = 1;
  }
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < keep.size(); ++i)
    if (keep[i]) positions.push_back(i);
  return select(positions);
}

Dataset Dataset::select(std::span<const std::size_t> positions) const {
  Dataset out;
  out.features_ = features_;
  out.classes_ = classes_;
  out.instances_.reserve(positions.size());
  out.index_.reserve(positions.size());
  for (std::size_t pos : positions) {
    out.index_.emplace(instances_.at(pos).id, out.instances_.size());
    out.instances_.push_back(instances_[pos]);
  }
  return out;
}

bool Dataset::operator==(const Dataset& other) const {
  if (features_ != other.features_ || classes_ != other.classes_ || instances_.size() != other.instances_.size())
    return false;
  for (std::size_t i = 0; i < instances_.size(); ++i) {
    const auto& a = instances_[i];
    const auto& b = other.instances_[i];
    if (a.id != b.id || a.label != b.label || a.values.size() != b.values.size()) return false;
    for (std::size_t f = 0; f < a.values.size(); ++f) {
      const bool ma = is_missing(a.values[f]);
      if (ma != is_missing(b.values[f]) || (!ma && a.values[f] != b.values[f])) return false;
    }
  }
  return true;
}

}  // namespace trainclean
