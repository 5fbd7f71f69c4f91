#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "learners/common.hpp"
#include "trainclean/learners/algorithms.hpp"
#include "trainclean/random.hpp"

namespace trainclean::learners {

namespace {

struct Condition {
  enum class Op { equal, at_most, above };
  std::size_t feature = 0;
  Op op = Op::equal;
  double value = 0.0;

  bool covers(std::span<const double> values) const {
    const double v = values[feature];
    if (is_missing(v)) return false;
    switch (op) {
      case Op::equal: return v == value;
      case Op::at_most: return v <= value;
      case Op::above: return v > value;
    }
    return false;
  }
};

struct Rule {
  std::vector<Condition> conditions;
  int label = 0;

  bool covers(std::span<const double> values) const {
    return std::all_of(conditions.begin(), conditions.end(), [&](const Condition& c) { return c.covers(values); });
  }
};

using Positions = std::vector<std::size_t>;

/// Sequential covering in the style of RIPPER: classes from rarest to most
/// frequent, FOIL-gain rule growth, reduced-error pruning of final conditions,
/// and optional passes that replace a rule when that lowers training error.
class RuleInducer {
 public:
  RuleInducer(const Dataset& data, const RuleConfig& config, std::uint64_t seed)
      : data_(data), config_(config), rng_(seed) {}

  std::pair<std::vector<Rule>, int> run() {
    const auto counts = data_.class_counts();
    std::vector<int> order;
    for (std::size_t c = 0; c < counts.size(); ++c)
      if (counts[c] > 0) order.push_back(static_cast<int>(c));
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return counts[a] < counts[b]; });
    const int fallback = order.back();

    Positions remaining(data_.size());
    for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;
    std::vector<Rule> rules;
    for (std::size_t k = 0; k + 1 < order.size(); ++k) learn_class(order[k], remaining, rules);

    for (int pass = 0; pass < config_.optimization_passes; ++pass) optimize(rules, fallback);
    return {std::move(rules), fallback};
  }

 private:
  int count_label(const Positions& ps, int label) const {
    return static_cast<int>(std::count_if(ps.begin(), ps.end(), [&](std::size_t p) { return data_[p].label == label; }));
  }

  Positions covered_by(const Rule& rule, const Positions& ps) const {
    Positions out;
    for (std::size_t p : ps)
      if (rule.covers(data_[p].values)) out.push_back(p);
    return out;
  }

  void split(const Positions& ps, int label, Positions& grow, Positions& prune) {
    Positions pos, neg;
    for (std::size_t p : ps) (data_[p].label == label ? pos : neg).push_back(p);
    grow.clear();
    prune.clear();
    for (Positions* group : {&pos, &neg}) {
      rng_.shuffle(std::span<std::size_t>(*group));
      const std::size_t n_grow = (group->size() * 2 + 2) / 3;
      grow.insert(grow.end(), group->begin(), group->begin() + static_cast<std::ptrdiff_t>(n_grow));
      prune.insert(prune.end(), group->begin() + static_cast<std::ptrdiff_t>(n_grow), group->end());
    }
    std::sort(grow.begin(), grow.end());
    std::sort(prune.begin(), prune.end());
  }

  Rule grow(const Positions& start, int label) const {
    Rule rule{{}, label};
    Positions covered = start;
    const double min_cov = config_.min_coverage;
    while (true) {
      const double p0 = count_label(covered, label);
      const double n0 = static_cast<double>(covered.size()) - p0;
      if (n0 == 0 || p0 == 0) break;
      const double base = std::log2(p0 / (p0 + n0));
      double best_gain = 1e-12;
      std::optional<Condition> best;
      auto consider = [&](double p1, double n1, const Condition& cond) {
        if (p1 < min_cov || p1 == 0) return;
        const double gain = p1 * (std::log2(p1 / (p1 + n1)) - base);
        if (gain > best_gain) {
          best_gain = gain;
          best = cond;
        }
      };
      for (std::size_t f = 0; f < data_.num_features(); ++f) {
        if (data_.features()[f].kind == FeatureKind::nominal) {
          const std::size_t K = data_.features()[f].categories.size();
          std::vector<double> pk(K, 0.0), nk(K, 0.0);
          for (std::size_t p : covered) {
            const double v = data_[p].values[f];
            if (is_missing(v)) continue;
            (data_[p].label == label ? pk : nk)[static_cast<std::size_t>(v)] += 1.0;
          }
          for (std::size_t k = 0; k < K; ++k)
            consider(pk[k], nk[k], {f, Condition::Op::equal, static_cast<double>(k)});
          continue;
        }
        Positions known;
        for (std::size_t p : covered)
          if (!is_missing(data_[p].values[f])) known.push_back(p);
        std::stable_sort(known.begin(), known.end(),
                         [&](std::size_t a, std::size_t b) { return data_[a].values[f] < data_[b].values[f]; });
        const double pt = count_label(known, label);
        const double nt = static_cast<double>(known.size()) - pt;
        double pl = 0, nl = 0;
        for (std::size_t i = 0; i + 1 < known.size(); ++i) {
          (data_[known[i]].label == label ? pl : nl) += 1.0;
          const double a = data_[known[i]].values[f], b = data_[known[i + 1]].values[f];
          if (a == b) continue;
          const double t = a + (b - a) / 2.0;
          consider(pl, nl, {f, Condition::Op::at_most, t});
          consider(pt - pl, nt - nl, {f, Condition::Op::above, t});
        }
      }
      if (!best) break;
      rule.conditions.push_back(*best);
      covered = covered_by(Rule{{*best}, label}, covered);
    }
    return rule;
  }

  Rule prune(const Rule& rule, const Positions& prune_set) const {
    if (prune_set.empty() || rule.conditions.size() <= 1) return rule;
    double best_value = -std::numeric_limits<double>::infinity();
    std::size_t best_len = rule.conditions.size();
    for (std::size_t len = 1; len <= rule.conditions.size(); ++len) {
      Rule prefix{{rule.conditions.begin(), rule.conditions.begin() + static_cast<std::ptrdiff_t>(len)}, rule.label};
      const auto cov = covered_by(prefix, prune_set);
      if (cov.empty()) continue;
      const double p = count_label(cov, rule.label);
      const double n = static_cast<double>(cov.size()) - p;
      const double value = (p - n) / (p + n);
      if (value > best_value) {
        best_value = value;
        best_len = len;
      }
    }
    Rule out = rule;
    out.conditions.resize(best_len);
    return out;
  }

  std::optional<Rule> induce(const Positions& ps, int label) {
    Rule rule;
    if (config_.prune) {
      Positions grow_set, prune_set;
      split(ps, label, grow_set, prune_set);
      rule = prune(grow(grow_set, label), prune_set);
    } else {
      rule = grow(ps, label);
    }
    if (rule.conditions.empty()) return std::nullopt;
    const auto cov = covered_by(rule, ps);
    const int p = count_label(cov, label);
    const int n = static_cast<int>(cov.size()) - p;
    if (p < config_.min_coverage || p == 0 || (config_.prune && n >= p)) return std::nullopt;
    return rule;
  }

  void learn_class(int label, Positions& remaining, std::vector<Rule>& rules) {
    while (count_label(remaining, label) > 0) {
      auto rule = induce(remaining, label);
      if (!rule) break;
      Positions rest;
      for (std::size_t p : remaining)
        if (!rule->covers(data_[p].values)) rest.push_back(p);
      remaining = std::move(rest);
      rules.push_back(std::move(*rule));
    }
  }

  int errors(const std::vector<Rule>& rules, int fallback) const {
    int wrong = 0;
    for (const auto& inst : data_.instances()) {
      int predicted = fallback;
      for (const auto& r : rules)
        if (r.covers(inst.values)) {
          predicted = r.label;
          break;
        }
      wrong += predicted != inst.label;
    }
    return wrong;
  }

  void optimize(std::vector<Rule>& rules, int fallback) {
    int current = errors(rules, fallback);
    for (std::size_t i = 0; i < rules.size(); ++i) {
      Positions reaching;
      for (std::size_t p = 0; p < data_.size(); ++p) {
        bool taken = false;
        for (std::size_t j = 0; j < i && !taken; ++j) taken = rules[j].covers(data_[p].values);
        if (!taken) reaching.push_back(p);
      }
      auto replacement = induce(reaching, rules[i].label);
      if (!replacement) continue;
      std::swap(rules[i], *replacement);
      const int candidate = errors(rules, fallback);
      if (candidate < current)
        current = candidate;
      else
        std::swap(rules[i], *replacement);
    }
  }

  const Dataset& data_;
  RuleConfig config_;
  Rng rng_;
};

class RuleModel final : public ModelImpl {
 public:
  RuleModel(std::vector<Rule> rules, int fallback) : rules_(std::move(rules)), fallback_(fallback) {}
  int predict(std::span<const double> values) const override {
    for (const auto& r : rules_)
      if (r.covers(values)) return r.label;
    return fallback_;
  }

 private:
  std::vector<Rule> rules_;
  int fallback_;
};

}  // namespace

ModelPtr fit_rules(const Dataset& train, const RuleConfig& config, std::uint64_t seed) {
  auto [rules, fallback] = RuleInducer(train, config, seed).run();
  return std::make_shared<RuleModel>(std::move(rules), fallback);
}

}  // namespace trainclean::learners
