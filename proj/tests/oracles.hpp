#pragma once

// Independent reference computations used to check the library.

#include <cmath>
#include <cstdint>
#include <vector>

namespace tc_test {

struct SignedRankOracle {
  double w_plus = 0;
  double w_minus = 0;
  int n = 0;
  double p_value = 1;
};

/// Signed-ranks statistic by counting, and the two-sided p-value by walking all
/// 2^n sign assignments. Zero differences (|d| < 1e-9) take the lowest ranks,
/// one is dropped when their count is odd, and their ranks are split evenly.
inline SignedRankOracle signed_rank_brute_force(const std::vector<double>& baseline,
                                                const std::vector<double>& treatment) {
  std::vector<double> nonzero;
  int zeros = 0;
  for (std::size_t i = 0; i < baseline.size(); ++i) {
    const double d = treatment[i] - baseline[i];
    if (std::abs(d) < 1e-9)
      ++zeros;
    else
      nonzero.push_back(d);
  }
  SignedRankOracle o;
  if (nonzero.empty()) return o;
  if (zeros % 2) --zeros;
  std::vector<double> ranks;
  for (int z = 0; z < zeros; ++z) {
    ranks.push_back((zeros + 1) / 2.0);
    o.w_plus += (zeros + 1) / 4.0;
    o.w_minus += (zeros + 1) / 4.0;
  }
  for (double d : nonzero) {
    int below = 0, same = 0;
    for (double e : nonzero) {
      if (std::abs(std::abs(e) - std::abs(d)) < 1e-9)
        ++same;
      else if (std::abs(e) < std::abs(d))
        ++below;
    }
    const double rank = zeros + below + (same + 1) / 2.0;
    ranks.push_back(rank);
    (d > 0 ? o.w_plus : o.w_minus) += rank;
  }
  o.n = static_cast<int>(ranks.size());
  const double t = std::min(o.w_plus, o.w_minus);
  std::uint64_t hits = 0;
  for (std::uint64_t signs = 0; signs < (std::uint64_t{1} << o.n); ++signs) {
    double w = 0;
    for (int i = 0; i < o.n; ++i)
      if ((signs >> i) & 1U) w += ranks[i];
    hits += w <= t + 1e-9;
  }
  o.p_value = std::min(1.0, 2.0 * static_cast<double>(hits) / std::ldexp(1.0, o.n));
  return o;
}

/// Percentage-point reduction metric for one pair, written straight from the
/// piecewise definition: 0 for ties, error branch when g >= bl, accuracy branch otherwise.
inline double reduction_of(double bl, double g) {
  if (std::abs(g - bl) < 1e-9) return 0.0;
  if (g >= bl) return (g - bl) / (100.0 - bl) * 100.0;
  return (g - bl) / bl * 100.0;
}

}  // namespace tc_test
