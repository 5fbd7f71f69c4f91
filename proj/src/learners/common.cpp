#include "learners/common.hpp"

#include <algorithm>
#include <cmath>

namespace trainclean::learners {

std::vector<char> present_classes(const Dataset& data) {
  std::vector<char> present(data.num_classes(), 0);
  for (const auto& inst : data.instances()) present[inst.label] = 1;
  return present;
}

MixedDistance::MixedDistance(const Dataset& train) {
  const std::size_t d = train.num_features();
  nominal_.resize(d);
  min_.assign(d, 0.0);
  range_.assign(d, 0.0);
  for (std::size_t f = 0; f < d; ++f) {
    nominal_[f] = train.features()[f].kind == FeatureKind::nominal;
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& inst : train.instances()) {
      const double v = inst.values[f];
      if (is_missing(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (lo <= hi) {
      min_[f] = lo;
      range_[f] = hi - lo;
    }
  }
}

double MixedDistance::operator()(std::span<const double> a, std::span<const double> b) const {
  double sum = 0.0;
  for (std::size_t f = 0; f < a.size(); ++f) {
    const double x = a[f], y = b[f];
    if (is_missing(x) || is_missing(y)) {
      sum += 1.0;
    } else if (nominal_[f]) {
      sum += x == y ? 0.0 : 1.0;
    } else if (range_[f] > 0.0) {
      const double diff = (x - y) / range_[f];
      sum += diff * diff;
    }
  }
  return std::sqrt(sum);
}

Encoder::Encoder(const Dataset& train) : features_(train.features()) {
  const std::size_t d = features_.size();
  mean_.assign(d, 0.0);
  scale_.assign(d, 1.0);
  offset_.resize(d);
  for (std::size_t f = 0; f < d; ++f) {
    offset_[f] = width_;
    if (features_[f].kind == FeatureKind::nominal) {
      width_ += features_[f].categories.size();
      continue;
    }
    width_ += 1;
    double sum = 0.0, sq = 0.0;
    std::size_t n = 0;
    for (const auto& inst : train.instances()) {
      const double v = inst.values[f];
      if (is_missing(v)) continue;
      sum += v;
      ++n;
    }
    if (n == 0) continue;
    mean_[f] = sum / static_cast<double>(n);
    for (const auto& inst : train.instances()) {
      const double v = inst.values[f];
      if (!is_missing(v)) sq += (v - mean_[f]) * (v - mean_[f]);
    }
    const double sd = std::sqrt(sq / static_cast<double>(n));
    scale_[f] = sd > 1e-12 ? sd : 1.0;
  }
}

void Encoder::encode(std::span<const double> values, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t f = 0; f < features_.size(); ++f) {
    const double v = values[f];
    if (is_missing(v)) continue;
    if (features_[f].kind == FeatureKind::nominal)
      out[offset_[f] + static_cast<std::size_t>(v)] = 1.0;
    else
      out[offset_[f]] = (v - mean_[f]) / scale_[f];
  }
}

std::vector<double> Encoder::encode_all(const Dataset& data) const {
  std::vector<double> out(data.size() * width_);
  for (std::size_t i = 0; i < data.size(); ++i)
    encode(data[i].values, std::span<double>(out.data() + i * width_, width_));
  return out;
}

std::vector<Neighbour> nearest(const MixedDistance& distance, const std::vector<std::vector<double>>& rows,
                               std::span<const double> probe, std::size_t k) {
  std::vector<Neighbour> all;
  all.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) all.push_back({distance(rows[i], probe), i});
  k = std::min(k, all.size());
  auto closer = [](const Neighbour& a, const Neighbour& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), closer);
  all.resize(k);
  return all;
}

}  // namespace trainclean::learners
