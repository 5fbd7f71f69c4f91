#include <algorithm>
#include <cmath>

#include "learners/common.hpp"
#include "trainclean/learners/algorithms.hpp"
#include "trainclean/random.hpp"

namespace trainclean::learners {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// One hidden sigmoid layer, one-vs-rest sigmoid outputs, online backprop with
/// momentum for a fixed number of epochs.
class MlpModel final : public ModelImpl {
 public:
  MlpModel(const Dataset& train, const MlpConfig& config, std::uint64_t seed)
      : encoder_(train), present_(present_classes(train)) {
    inputs_ = encoder_.width();
    hidden_ = static_cast<std::size_t>(config.hidden_units);
    outputs_ = train.num_classes();
    Rng rng(seed);
    w1_.resize(hidden_ * (inputs_ + 1));
    w2_.resize(outputs_ * (hidden_ + 1));
    for (auto& w : w1_) w = rng.uniform(-0.5, 0.5);
    for (auto& w : w2_) w = rng.uniform(-0.5, 0.5);

    const auto x = encoder_.encode_all(train);
    std::vector<double> dw1(w1_.size(), 0.0), dw2(w2_.size(), 0.0);
    std::vector<double> h(hidden_), o(outputs_), delta_o(outputs_), delta_h(hidden_);
    std::vector<std::size_t> order(train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const double lr = config.learning_rate, mom = config.momentum;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
      rng.shuffle(std::span<std::size_t>(order));
      for (std::size_t i : order) {
        const double* xi = &x[i * inputs_];
        forward(xi, h, o);
        const int label = train[i].label;
        for (std::size_t c = 0; c < outputs_; ++c) {
          const double t = static_cast<int>(c) == label ? 1.0 : 0.0;
          delta_o[c] = (t - o[c]) * o[c] * (1.0 - o[c]);
        }
        for (std::size_t j = 0; j < hidden_; ++j) {
          double s = 0.0;
          for (std::size_t c = 0; c < outputs_; ++c) s += w2_[c * (hidden_ + 1) + j] * delta_o[c];
          delta_h[j] = s * h[j] * (1.0 - h[j]);
        }
        for (std::size_t c = 0; c < outputs_; ++c) {
          double* w = &w2_[c * (hidden_ + 1)];
          double* dw = &dw2[c * (hidden_ + 1)];
          for (std::size_t j = 0; j <= hidden_; ++j) {
            const double in = j < hidden_ ? h[j] : 1.0;
            dw[j] = lr * delta_o[c] * in + mom * dw[j];
            w[j] += dw[j];
          }
        }
        for (std::size_t j = 0; j < hidden_; ++j) {
          double* w = &w1_[j * (inputs_ + 1)];
          double* dw = &dw1[j * (inputs_ + 1)];
          for (std::size_t k = 0; k <= inputs_; ++k) {
            const double in = k < inputs_ ? xi[k] : 1.0;
            dw[k] = lr * delta_h[j] * in + mom * dw[k];
            w[k] += dw[k];
          }
        }
      }
    }
  }

  int predict(std::span<const double> values) const override {
    std::vector<double> x(inputs_), h(hidden_), o(outputs_);
    encoder_.encode(values, x);
    forward(x.data(), h, o);
    return argmax_present(o, present_);
  }

 private:
  void forward(const double* x, std::vector<double>& h, std::vector<double>& o) const {
    for (std::size_t j = 0; j < hidden_; ++j) {
      const double* w = &w1_[j * (inputs_ + 1)];
      double s = w[inputs_];
      for (std::size_t k = 0; k < inputs_; ++k) s += w[k] * x[k];
      h[j] = sigmoid(s);
    }
    for (std::size_t c = 0; c < outputs_; ++c) {
      const double* w = &w2_[c * (hidden_ + 1)];
      double s = w[hidden_];
      for (std::size_t j = 0; j < hidden_; ++j) s += w[j] * h[j];
      o[c] = sigmoid(s);
    }
  }

  Encoder encoder_;
  std::vector<char> present_;
  std::size_t inputs_ = 0, hidden_ = 0, outputs_ = 0;
  std::vector<double> w1_, w2_;
};

/// Multinomial logistic regression fitted by full-batch gradient descent with an
/// L2 penalty on the non-bias weights.
class LogisticModel final : public ModelImpl {
 public:
  LogisticModel(const Dataset& train, const LogisticConfig& config)
      : encoder_(train), present_(present_classes(train)) {
    width_ = encoder_.width() + 1;
    classes_ = train.num_classes();
    weights_.assign(classes_ * width_, 0.0);
    const auto x = encoder_.encode_all(train);
    const std::size_t n = train.size();
    const std::size_t d = encoder_.width();
    std::vector<double> grad(weights_.size()), p(classes_);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        probabilities(&x[i * d], p);
        for (std::size_t c = 0; c < classes_; ++c) {
          const double err = p[c] - (static_cast<int>(c) == train[i].label ? 1.0 : 0.0);
          double* g = &grad[c * width_];
          for (std::size_t k = 0; k < d; ++k) g[k] += err * x[i * d + k];
          g[d] += err;
        }
      }
      for (std::size_t c = 0; c < classes_; ++c)
        for (std::size_t k = 0; k < width_; ++k) {
          double g = grad[c * width_ + k] / static_cast<double>(n);
          if (k < d) g += config.l2 * weights_[c * width_ + k];
          weights_[c * width_ + k] -= config.learning_rate * g;
        }
    }
  }

  int predict(std::span<const double> values) const override {
    std::vector<double> x(encoder_.width()), p(classes_);
    encoder_.encode(values, x);
    probabilities(x.data(), p);
    return argmax_present(p, present_);
  }

 private:
  void probabilities(const double* x, std::vector<double>& p) const {
    const std::size_t d = width_ - 1;
    double top = -INFINITY;
    for (std::size_t c = 0; c < classes_; ++c) {
      const double* w = &weights_[c * width_];
      double s = w[d];
      for (std::size_t k = 0; k < d; ++k) s += w[k] * x[k];
      p[c] = s;
      top = std::max(top, s);
    }
    double z = 0.0;
    for (auto& v : p) z += (v = std::exp(v - top));
    for (auto& v : p) v /= z;
  }

  Encoder encoder_;
  std::vector<char> present_;
  std::size_t width_ = 0, classes_ = 0;
  std::vector<double> weights_;
};

}  // namespace

ModelPtr fit_mlp(const Dataset& train, const MlpConfig& config, std::uint64_t seed) {
  return std::make_shared<MlpModel>(train, config, seed);
}

ModelPtr fit_logistic(const Dataset& train, const LogisticConfig& config) {
  return std::make_shared<LogisticModel>(train, config);
}

}  // namespace trainclean::learners
