#include <algorithm>
#include <cmath>
#include <numbers>

#include "learners/common.hpp"
#include "trainclean/learners/algorithms.hpp"

namespace trainclean::learners {

namespace {

constexpr int kBins = 10;

// Missing cells are skipped in the likelihood product. Gaussian statistics are
// accumulated over sorted values so the model does not depend on instance order.
class NaiveBayesModel final : public ModelImpl {
 public:
  NaiveBayesModel(const Dataset& train, NaiveBayesConfig config) : config_(config) {
    const std::size_t C = train.num_classes();
    const std::size_t d = train.num_features();
    present_ = present_classes(train);
    const auto counts = train.class_counts();
    log_prior_.resize(C);
    for (std::size_t c = 0; c < C; ++c)
      log_prior_[c] = std::log((counts[c] + config_.laplace) / (train.size() + C * config_.laplace));

    features_.resize(d);
    for (std::size_t f = 0; f < d; ++f) {
      auto& model = features_[f];
      model.nominal = train.features()[f].kind == FeatureKind::nominal;
      std::vector<std::vector<double>> values(C);
      for (const auto& inst : train.instances())
        if (!is_missing(inst.values[f])) values[inst.label].push_back(inst.values[f]);
      if (model.nominal) {
        const std::size_t K = train.features()[f].categories.size();
        model.table.assign(C, std::vector<double>(K, 0.0));
        for (std::size_t c = 0; c < C; ++c) {
          for (double v : values[c]) model.table[c][static_cast<std::size_t>(v)] += 1.0;
          for (auto& cell : model.table[c])
            cell = std::log((cell + config_.laplace) / (values[c].size() + K * config_.laplace));
        }
      } else if (config_.histogram) {
        double lo = INFINITY, hi = -INFINITY;
        for (const auto& vs : values)
          for (double v : vs) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
          }
        model.lo = lo <= hi ? lo : 0.0;
        model.width = lo < hi ? (hi - lo) / kBins : 1.0;
        model.table.assign(C, std::vector<double>(kBins, 0.0));
        for (std::size_t c = 0; c < C; ++c) {
          for (double v : values[c]) model.table[c][bin(model, v)] += 1.0;
          for (auto& cell : model.table[c])
            cell = std::log((cell + config_.laplace) / (values[c].size() + kBins * config_.laplace));
        }
      } else {
        model.mean.assign(C, 0.0);
        model.var.assign(C, 1.0);
        double max_var = 0.0;
        for (std::size_t c = 0; c < C; ++c) {
          auto& vs = values[c];
          if (vs.empty()) continue;
          std::sort(vs.begin(), vs.end());
          double sum = 0.0;
          for (double v : vs) sum += v;
          const double mean = sum / vs.size();
          std::vector<double> sq;
          sq.reserve(vs.size());
          for (double v : vs) sq.push_back((v - mean) * (v - mean));
          std::sort(sq.begin(), sq.end());
          double ss = 0.0;
          for (double s : sq) ss += s;
          model.mean[c] = mean;
          model.var[c] = ss / vs.size();
          max_var = std::max(max_var, model.var[c]);
        }
        const double floor = std::max(1e-9 * max_var, 1e-9);
        for (std::size_t c = 0; c < C; ++c) {
          if (values[c].empty()) model.var[c] = std::max(max_var, 1.0);
          model.var[c] = std::max(model.var[c], floor);
        }
      }
    }
  }

  int predict(std::span<const double> values) const override {
    std::vector<double> score(log_prior_);
    for (std::size_t f = 0; f < features_.size(); ++f) {
      const double v = values[f];
      if (is_missing(v)) continue;
      const auto& model = features_[f];
      for (std::size_t c = 0; c < score.size(); ++c) {
        if (model.nominal) {
          const auto idx = static_cast<std::size_t>(v);
          if (idx < model.table[c].size()) score[c] += model.table[c][idx];
        } else if (config_.histogram) {
          score[c] += model.table[c][bin(model, v)];
        } else {
          const double diff = v - model.mean[c];
          score[c] += -0.5 * std::log(2.0 * std::numbers::pi * model.var[c]) - diff * diff / (2.0 * model.var[c]);
        }
      }
    }
    return argmax_present(score, present_);
  }

 private:
  struct FeatureModel {
    bool nominal = false;
    std::vector<std::vector<double>> table;  // log-probabilities per class and category/bin
    std::vector<double> mean, var;
    double lo = 0.0, width = 1.0;
  };

  static std::size_t bin(const FeatureModel& m, double v) {
    const double b = std::floor((v - m.lo) / m.width);
    return static_cast<std::size_t>(std::clamp(b, 0.0, static_cast<double>(kBins - 1)));
  }

  NaiveBayesConfig config_;
  std::vector<char> present_;
  std::vector<double> log_prior_;
  std::vector<FeatureModel> features_;
};

}  // namespace

ModelPtr fit_naive_bayes(const Dataset& train, const NaiveBayesConfig& config) {
  return std::make_shared<NaiveBayesModel>(train, config);
}

}  // namespace trainclean::learners
