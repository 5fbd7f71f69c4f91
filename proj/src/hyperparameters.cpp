#include "trainclean/hyperparameters.hpp"

#include <algorithm>
#include <cmath>

#include "trainclean/error.hpp"

namespace trainclean {

namespace {

constexpr const char* kUnlimited = "unlimited";

ParamSpec integer(std::string name, double lo, double hi, std::int64_t def) {
  return {std::move(name), ParamKind::integer_range, lo, hi, {}, false, def};
}
ParamSpec real(std::string name, double lo, double hi, double def) {
  return {std::move(name), ParamKind::real_range, lo, hi, {}, false, def};
}
ParamSpec log_real(std::string name, double lo, double hi, double def) {
  return {std::move(name), ParamKind::log_real_range, lo, hi, {}, false, def};
}
ParamSpec categorical(std::string name, std::vector<std::string> choices, std::string def) {
  return {std::move(name), ParamKind::categorical, 0, 0, std::move(choices), false, std::move(def)};
}

Error invalid(const std::string& what) { return Error(ErrorCode::invalid_hyperparameter, what); }

/// Coerces a value to the parameter's kind, throwing on type or range violations.
ParamValue check(const ParamSpec& spec, const ParamValue& value) {
  switch (spec.kind) {
    case ParamKind::integer_range: {
      if (const auto* s = std::get_if<std::string>(&value)) {
        if (spec.allows_unlimited && *s == kUnlimited) return value;
        throw invalid(spec.name + " expects an integer");
      }
      std::int64_t v;
      if (const auto* d = std::get_if<double>(&value)) {
        if (*d != std::floor(*d)) throw invalid(spec.name + " expects an integer");
        v = static_cast<std::int64_t>(*d);
      } else {
        v = std::get<std::int64_t>(value);
      }
      if (v < spec.lower || v > spec.upper) throw invalid(spec.name + " out of range");
      return v;
    }
    case ParamKind::real_range:
    case ParamKind::log_real_range: {
      double v;
      if (const auto* i = std::get_if<std::int64_t>(&value))
        v = static_cast<double>(*i);
      else if (const auto* d = std::get_if<double>(&value))
        v = *d;
      else
        throw invalid(spec.name + " expects a real number");
      if (!(v >= spec.lower && v <= spec.upper)) throw invalid(spec.name + " out of range");
      return v;
    }
    case ParamKind::categorical: {
      const auto* s = std::get_if<std::string>(&value);
      if (!s || std::find(spec.choices.begin(), spec.choices.end(), *s) == spec.choices.end())
        throw invalid(spec.name + " expects one of its declared choices");
      return value;
    }
  }
  throw invalid(spec.name);
}

nlohmann::json value_to_json(const ParamValue& v) {
  return std::visit([](const auto& x) { return nlohmann::json(x); }, v);
}

}  // namespace

std::string to_string(AlgorithmId id) {
  switch (id) {
    case AlgorithmId::knn: return "knn";
    case AlgorithmId::naive_bayes: return "naive_bayes";
    case AlgorithmId::decision_tree: return "decision_tree";
    case AlgorithmId::random_forest: return "random_forest";
    case AlgorithmId::rule_learner: return "rule_learner";
    case AlgorithmId::mlp: return "mlp";
    case AlgorithmId::logistic: return "logistic";
    case AlgorithmId::locally_weighted: return "locally_weighted";
  }
  return "unknown";
}

AlgorithmId parse_algorithm(const std::string& name) {
  for (AlgorithmId id : kAllAlgorithms)
    if (to_string(id) == name) return id;
  throw Error(ErrorCode::invalid_argument, "unknown algorithm '" + name + "'");
}

std::int64_t Hyperparameters::integer(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw invalid("missing parameter " + name);
  if (const auto* v = std::get_if<std::int64_t>(&it->second)) return *v;
  throw invalid(name + " is not an integer");
}

double Hyperparameters::real(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw invalid("missing parameter " + name);
  if (const auto* v = std::get_if<double>(&it->second)) return *v;
  if (const auto* v = std::get_if<std::int64_t>(&it->second)) return static_cast<double>(*v);
  throw invalid(name + " is not a real number");
}

const std::string& Hyperparameters::choice(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw invalid("missing parameter " + name);
  if (const auto* v = std::get_if<std::string>(&it->second)) return *v;
  throw invalid(name + " is not a choice");
}

std::optional<std::int64_t> Hyperparameters::bounded_integer(const std::string& name) const {
  auto it = values_.find(name);
  if (it != values_.end())
    if (const auto* s = std::get_if<std::string>(&it->second); s && *s == kUnlimited) return std::nullopt;
  return integer(name);
}

nlohmann::json Hyperparameters::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, value] : values_) j[name] = value_to_json(value);
  return j;
}

Hyperparameters Hyperparameters::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw invalid("hyper-parameters must be a JSON object");
  Hyperparameters h;
  for (const auto& [name, value] : j.items()) {
    if (value.is_number_integer())
      h.set(name, value.get<std::int64_t>());
    else if (value.is_number())
      h.set(name, value.get<double>());
    else if (value.is_string())
      h.set(name, value.get<std::string>());
    else
      throw invalid("unsupported value for " + name);
  }
  return h;
}

HyperparameterSpace::HyperparameterSpace(std::vector<ParamSpec> params) : params_(std::move(params)) {
  for (const auto& p : params_) {
    if (p.kind == ParamKind::categorical) {
      if (p.choices.empty()) throw invalid(p.name + " declares no choices");
    } else {
      if (!(p.lower <= p.upper)) throw invalid(p.name + " has an empty range");
      if (p.kind == ParamKind::log_real_range && p.lower <= 0.0) throw invalid(p.name + " log range must be positive");
    }
    check(p, p.default_value);
  }
}

const ParamSpec* HyperparameterSpace::find(const std::string& name) const {
  for (const auto& p : params_)
    if (p.name == name) return &p;
  return nullptr;
}

Hyperparameters HyperparameterSpace::defaults() const {
  Hyperparameters h;
  for (const auto& p : params_) h.set(p.name, p.default_value);
  return h;
}

Hyperparameters HyperparameterSpace::resolve(const Hyperparameters& partial) const {
  for (const auto& [name, value] : partial.values())
    if (!find(name)) throw invalid("unknown parameter " + name);
  Hyperparameters h;
  for (const auto& p : params_) {
    auto it = partial.values().find(p.name);
    h.set(p.name, check(p, it == partial.values().end() ? p.default_value : it->second));
  }
  return h;
}

bool HyperparameterSpace::accepts(const Hyperparameters& values) const {
  if (values.values().size() != params_.size()) return false;
  try {
    for (const auto& p : params_) {
      auto it = values.values().find(p.name);
      if (it == values.values().end()) return false;
      check(p, it->second);
    }
  } catch (const Error&) {
    return false;
  }
  return true;
}

Hyperparameters HyperparameterSpace::sample(Rng& rng) const {
  Hyperparameters h;
  for (const auto& p : params_) {
    switch (p.kind) {
      case ParamKind::integer_range: {
        const auto lo = static_cast<std::int64_t>(p.lower);
        const auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(p.upper) - lo + 1);
        const auto draw = rng.below(span + (p.allows_unlimited ? 1 : 0));
        if (draw == span)
          h.set(p.name, std::string(kUnlimited));
        else
          h.set(p.name, lo + static_cast<std::int64_t>(draw));
        break;
      }
      case ParamKind::real_range:
        h.set(p.name, std::clamp(rng.uniform(p.lower, p.upper), p.lower, p.upper));
        break;
      case ParamKind::log_real_range:
        h.set(p.name, std::clamp(std::exp(rng.uniform(std::log(p.lower), std::log(p.upper))), p.lower, p.upper));
        break;
      case ParamKind::categorical:
        h.set(p.name, p.choices[rng.below(p.choices.size())]);
        break;
    }
  }
  return h;
}

HyperparameterSpace hyperparameter_space(AlgorithmId algorithm) {
  switch (algorithm) {
    case AlgorithmId::knn:
      return HyperparameterSpace({integer("k", 1, 25, 5),
                                  categorical("weighting", {"uniform", "inverse-distance"}, "uniform"),
                                  categorical("distance", {"mixed-euclidean-overlap"}, "mixed-euclidean-overlap")});
    case AlgorithmId::naive_bayes:
      return HyperparameterSpace({categorical("numeric_model", {"gaussian", "histogram-10bin"}, "gaussian"),
                                  real("laplace", 0.1, 5.0, 1.0)});
    case AlgorithmId::decision_tree:
      return HyperparameterSpace({integer("min_leaf", 1, 20, 2), real("confidence", 0.05, 0.5, 0.25),
                                  categorical("pruning", {"on", "off"}, "on")});
    case AlgorithmId::random_forest: {
      ParamSpec depth = integer("max_depth", 1, 30, 0);
      depth.allows_unlimited = true;
      depth.default_value = std::string(kUnlimited);
      return HyperparameterSpace({integer("trees", 10, 200, 50),
                                  categorical("features_per_split", {"sqrt", "log2", "all"}, "sqrt"), depth});
    }
    case AlgorithmId::rule_learner:
      return HyperparameterSpace({integer("min_coverage", 1, 10, 2), categorical("pruning", {"on", "off"}, "on"),
                                  integer("optimization_passes", 0, 3, 2)});
    case AlgorithmId::mlp:
      return HyperparameterSpace({integer("hidden_units", 2, 64, 8), log_real("learning_rate", 1e-4, 1e-1, 0.1),
                                  integer("epochs", 10, 500, 200), real("momentum", 0.0, 0.9, 0.2)});
    case AlgorithmId::logistic:
      return HyperparameterSpace({log_real("l2", 1e-6, 1e1, 1e-4), integer("epochs", 50, 1000, 200),
                                  log_real("learning_rate", 1e-4, 1e0, 0.5)});
    case AlgorithmId::locally_weighted:
      return HyperparameterSpace({integer("neighborhood", 5, 50, 10),
                                  categorical("kernel", {"linear", "inverse"}, "linear")});
  }
  throw invalid("unknown algorithm");
}

Hyperparameters default_hyperparameters(AlgorithmId algorithm) { return hyperparameter_space(algorithm).defaults(); }

LearnerSpec LearnerSpec::with_defaults(AlgorithmId algorithm) { return {algorithm, default_hyperparameters(algorithm)}; }

nlohmann::json LearnerSpec::to_json() const {
  return {{"algorithm", to_string(algorithm)}, {"params", params.to_json()}};
}

LearnerSpec LearnerSpec::from_json(const nlohmann::json& j) {
  if (j.is_string()) return with_defaults(parse_algorithm(j.get<std::string>()));
  if (!j.is_object() || !j.contains("algorithm")) throw invalid("learner spec needs an 'algorithm' field");
  for (const auto& [key, _] : j.items())
    if (key != "algorithm" && key != "params") throw invalid("unknown learner spec field " + key);
  const AlgorithmId algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
  Hyperparameters partial = j.contains("params") ? Hyperparameters::from_json(j.at("params")) : Hyperparameters{};
  return {algorithm, hyperparameter_space(algorithm).resolve(partial)};
}

std::vector<LearnerSpec> default_roster() {
  std::vector<LearnerSpec> roster;
  for (AlgorithmId id : kAllAlgorithms) roster.push_back(LearnerSpec::with_defaults(id));
  return roster;
}

std::vector<LearnerSpec> specs_from_json(const nlohmann::json& array) {
  if (!array.is_array()) throw invalid("expected a JSON array of learner specs");
  std::vector<LearnerSpec> specs;
  for (const auto& item : array) specs.push_back(LearnerSpec::from_json(item));
  return specs;
}

nlohmann::json specs_to_json(const std::vector<LearnerSpec>& specs) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& s : specs) j.push_back(s.to_json());
  return j;
}

}  // namespace trainclean
