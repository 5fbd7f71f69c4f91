#pragma once

#include <span>
#include <vector>

#include "trainclean/dataset.hpp"

namespace trainclean::learners {

/// Presence flags per class in a training set.
std::vector<char> present_classes(const Dataset& data);

/// Mixed Euclidean/overlap distance: numeric features range-normalised on the
/// training set, nominal features contribute 0/1, a missing cell contributes 1.
class MixedDistance {
 public:
  explicit MixedDistance(const Dataset& train);
  double operator()(std::span<const double> a, std::span<const double> b) const;

 private:
  std::vector<char> nominal_;
  std::vector<double> min_;
  std::vector<double> range_;
};

/// Dense encoding for gradient learners: numeric features standardised (missing
/// maps to the mean, i.e. 0), nominal features one-hot (missing = all zeros).
class Encoder {
 public:
  explicit Encoder(const Dataset& train);
  std::size_t width() const { return width_; }
  void encode(std::span<const double> values, std::span<double> out) const;
  std::vector<double> encode_all(const Dataset& data) const;

 private:
  std::vector<FeatureSpec> features_;
  std::vector<double> mean_;
  std::vector<double> scale_;
  std::vector<std::size_t> offset_;
  std::size_t width_ = 0;
};

/// Training-set indices of the k nearest neighbours, nearest first; distance
/// ties resolve toward the earlier training instance.
struct Neighbour {
  double distance;
  std::size_t index;
};
std::vector<Neighbour> nearest(const MixedDistance& distance, const std::vector<std::vector<double>>& rows,
                               std::span<const double> probe, std::size_t k);

}  // namespace trainclean::learners
