#include "trainclean/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "trainclean/error.hpp"

namespace trainclean {

double cv_accuracy(const Learner& target, const Dataset& data, const Protocol& protocol) {
  const Partition partition = make_partition(data, protocol);
  return cross_validate(data, partition, target, protocol.seed).accuracy(data);
}

void PairedResults::add(std::string name, double bl, double g) {
  datasets.push_back(std::move(name));
  baseline.push_back(bl);
  treatment.push_back(g);
}

PairedResults PairedResults::mirrored() const { return {datasets, treatment, baseline}; }

namespace {

void check_pairs(const PairedResults& pairs) {
  if (pairs.baseline.size() != pairs.treatment.size())
    throw Error(ErrorCode::index_mismatch, "baseline and treatment have different lengths");
  if (!pairs.datasets.empty() && pairs.datasets.size() != pairs.baseline.size())
    throw Error(ErrorCode::index_mismatch, "dataset names do not match the pairs");
}

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

}  // namespace

nlohmann::json ReductionMetrics::to_json() const {
  return {{"red_err", optional_json(red_err)}, {"red_acc", optional_json(red_acc)},
          {"greater", greater},           {"equal", equal},
          {"less", less},                 {"perfect_baseline", perfect_baseline}};
}

ReductionMetrics reduction_metrics(const PairedResults& pairs) {
  check_pairs(pairs);
  ReductionMetrics m;
  double err_sum = 0.0, acc_sum = 0.0;
  int err_n = 0, acc_n = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double bl = pairs.baseline[i], g = pairs.treatment[i];
    if (!(bl >= 0.0 && bl <= 100.0 && g >= 0.0 && g <= 100.0))
      throw Error(ErrorCode::invalid_argument, "accuracies must be percentages in [0, 100]");
    const double diff = g - bl;
    if (std::abs(diff) < kTieTolerance) {
      ++m.equal;
      ++err_n;  // ties sit in the improving branch and contribute 0
      if (bl >= 100.0) m.perfect_baseline.push_back(pairs.datasets.empty() ? std::to_string(i) : pairs.datasets[i]);
    } else if (diff > 0) {
      ++m.greater;
      ++err_n;
      err_sum += diff / (100.0 - bl) * 100.0;
    } else {
      ++m.less;
      ++acc_n;
      acc_sum += diff / bl * 100.0;
    }
  }
  if (err_n) m.red_err = err_sum / err_n;
  if (acc_n) m.red_acc = acc_sum / acc_n;
  return m;
}

std::string to_string(Direction direction) {
  switch (direction) {
    case Direction::none: return "none";
    case Direction::treatment: return "treatment";
    case Direction::baseline: return "baseline";
  }
  return "none";
}

nlohmann::json WilcoxonVerdict::to_json() const {
  return {{"w_plus", w_plus},
          {"w_minus", w_minus},
          {"n_effective", n_effective},
          {"p_value", p_value},
          {"significant", significant},
          {"direction", to_string(direction)},
          {"method", method == WilcoxonMethod::exact ? "exact" : "normal"}};
}

namespace {

struct RankedDifferences {
  std::vector<double> ranks;  // one per effective pair
  double w_plus = 0.0;
  double w_minus = 0.0;
};

RankedDifferences rank_differences(const PairedResults& pairs) {
  std::vector<double> diffs;
  int zeros = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double d = pairs.treatment[i] - pairs.baseline[i];
    if (std::abs(d) < kTieTolerance)
      ++zeros;
    else
      diffs.push_back(d);
  }
  RankedDifferences out;
  if (diffs.empty()) return out;  // no signal at all
  if (zeros % 2 == 1) --zeros;

  // Zeros take the lowest ranks; their rank total is split evenly.
  const double zero_rank_total = zeros * (zeros + 1) / 2.0;
  for (int z = 0; z < zeros; ++z) out.ranks.push_back((zeros + 1) / 2.0);
  out.w_plus = out.w_minus = zero_rank_total / 2.0;

  std::vector<std::size_t> order(diffs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(diffs[a]) < std::abs(diffs[b]); });
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && std::abs(diffs[order[j]]) - std::abs(diffs[order[j - 1]]) < kTieTolerance) ++j;
    // positions i..j-1 share the average of ranks zeros+i+1 .. zeros+j
    const double rank = zeros + (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      out.ranks.push_back(rank);
      (diffs[order[k]] > 0 ? out.w_plus : out.w_minus) += rank;
    }
    i = j;
  }
  return out;
}

// P(W+ <= t) under random signs on the given ranks. Ranks are multiples of 0.5,
// so the distribution is built over doubled ranks.
double exact_lower_tail(const std::vector<double>& ranks, double t) {
  std::vector<long> doubled;
  long total = 0;
  for (double r : ranks) {
    doubled.push_back(std::lround(2.0 * r));
    total += doubled.back();
  }
  std::vector<double> ways(static_cast<std::size_t>(total) + 1, 0.0);
  ways[0] = 1.0;
  long reach = 0;
  for (long r : doubled) {
    for (long s = reach; s >= 0; --s)
      if (ways[static_cast<std::size_t>(s)] != 0.0) ways[static_cast<std::size_t>(s + r)] += ways[static_cast<std::size_t>(s)];
    reach += r;
  }
  const double limit = 2.0 * t + 1e-9;
  double count = 0.0;
  for (long s = 0; s <= total && static_cast<double>(s) <= limit; ++s) count += ways[static_cast<std::size_t>(s)];
  return count / std::ldexp(1.0, static_cast<int>(ranks.size()));
}

}  // namespace

WilcoxonVerdict wilcoxon_with(const PairedResults& pairs, WilcoxonMethod method, double alpha) {
  check_pairs(pairs);
  if (pairs.size() < 5) throw Error(ErrorCode::too_few_pairs, "the signed-ranks test needs at least 5 pairs");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::invalid_argument, "alpha must lie in (0, 1)");
  const RankedDifferences ranked = rank_differences(pairs);
  WilcoxonVerdict v;
  v.method = method;
  v.w_plus = ranked.w_plus;
  v.w_minus = ranked.w_minus;
  v.n_effective = static_cast<int>(ranked.ranks.size());
  if (v.n_effective == 0) return v;

  const double t = std::min(v.w_plus, v.w_minus);
  if (method == WilcoxonMethod::exact) {
    v.p_value = std::min(1.0, 2.0 * exact_lower_tail(ranked.ranks, t));
  } else {
    const double n = v.n_effective;
    const double z = (t - n * (n + 1) / 4.0) / std::sqrt(n * (n + 1) * (2 * n + 1) / 24.0);
    v.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::normal_distribution<double>(), z));
  }
  v.significant = v.p_value <= alpha;
  if (v.significant && v.w_plus != v.w_minus)
    v.direction = v.w_plus > v.w_minus ? Direction::treatment : Direction::baseline;
  return v;
}

WilcoxonVerdict wilcoxon(const PairedResults& pairs, double alpha) {
  check_pairs(pairs);
  if (pairs.size() < 5) throw Error(ErrorCode::too_few_pairs, "the signed-ranks test needs at least 5 pairs");
  const int n_eff = static_cast<int>(rank_differences(pairs).ranks.size());
  return wilcoxon_with(pairs, n_eff <= kExactWilcoxonLimit ? WilcoxonMethod::exact : WilcoxonMethod::normal, alpha);
}

std::string format_column(const PairedResults& pairs, const ReductionMetrics& metrics,
                          const std::optional<WilcoxonVerdict>& verdict) {
  auto fixed = [](const std::optional<double>& v) {
    if (!v) return std::string("NA");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *v);
    return std::string(buf);
  };
  std::optional<double> mean;
  if (pairs.size())
    mean = std::accumulate(pairs.treatment.begin(), pairs.treatment.end(), 0.0) / static_cast<double>(pairs.size());
  std::string marker = "n/a";
  if (verdict) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s (p=%.4f, %s)", verdict->significant ? "*" : "-", verdict->p_value,
                  to_string(verdict->direction).c_str());
    marker = buf;
  }
  std::string out;
  out += "accuracy  " + fixed(mean) + "\n";
  out += "%red_err  " + fixed(metrics.red_err) + "\n";
  out += "%red_acc  " + fixed(metrics.red_acc) + "\n";
  out += "count     " + std::to_string(metrics.greater) + "," + std::to_string(metrics.equal) + "," +
         std::to_string(metrics.less) + "\n";
  out += "signif    " + marker + "\n";
  return out;
}

}  // namespace trainclean
