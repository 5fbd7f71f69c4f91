#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "trainclean/random.hpp"

namespace trainclean {

enum class AlgorithmId {
  knn,
  naive_bayes,
  decision_tree,
  random_forest,
  rule_learner,
  mlp,
  logistic,
  locally_weighted,
};

inline constexpr AlgorithmId kAllAlgorithms[] = {
    AlgorithmId::knn,          AlgorithmId::naive_bayes, AlgorithmId::decision_tree,
    AlgorithmId::random_forest, AlgorithmId::rule_learner, AlgorithmId::mlp,
    AlgorithmId::logistic,     AlgorithmId::locally_weighted,
};

std::string to_string(AlgorithmId id);
AlgorithmId parse_algorithm(const std::string& name);

/// Integer, real, or categorical choice.
using ParamValue = std::variant<std::int64_t, double, std::string>;

enum class ParamKind { integer_range, real_range, log_real_range, categorical };

struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::integer_range;
  double lower = 0.0;
  double upper = 0.0;
  std::vector<std::string> choices;
  /// Integer ranges only: the string "unlimited" is also accepted.
  bool allows_unlimited = false;
  ParamValue default_value;
};

class Hyperparameters {
 public:
  Hyperparameters() = default;
  explicit Hyperparameters(std::map<std::string, ParamValue> values) : values_(std::move(values)) {}

  const std::map<std::string, ParamValue>& values() const { return values_; }
  bool contains(const std::string& name) const { return values_.count(name) != 0; }
  void set(const std::string& name, ParamValue value) { values_[name] = std::move(value); }

  std::int64_t integer(const std::string& name) const;
  double real(const std::string& name) const;
  const std::string& choice(const std::string& name) const;
  /// Integer parameter that may be "unlimited" (returned as nullopt).
  std::optional<std::int64_t> bounded_integer(const std::string& name) const;

  nlohmann::json to_json() const;
  static Hyperparameters from_json(const nlohmann::json& j);

  bool operator==(const Hyperparameters&) const = default;

 private:
  std::map<std::string, ParamValue> values_;
};

class HyperparameterSpace {
 public:
  HyperparameterSpace() = default;
  explicit HyperparameterSpace(std::vector<ParamSpec> params);

  const std::vector<ParamSpec>& params() const { return params_; }
  const ParamSpec* find(const std::string& name) const;

  Hyperparameters defaults() const;
  /// Fills unspecified parameters with defaults, then validates. Throws
  /// invalid_hyperparameter on unknown names, wrong types or out-of-range values.
  Hyperparameters resolve(const Hyperparameters& partial) const;
  bool accepts(const Hyperparameters& values) const;

  /// One independent draw: integer/real uniform, log-real uniform in log domain,
  /// categorical uniform. For unlimited-capable integers "unlimited" is one extra
  /// equally likely outcome.
  Hyperparameters sample(Rng& rng) const;

 private:
  std::vector<ParamSpec> params_;
};

HyperparameterSpace hyperparameter_space(AlgorithmId algorithm);
Hyperparameters default_hyperparameters(AlgorithmId algorithm);

/// Algorithm plus its hyper-parameter assignment. Serializes as
/// {"algorithm": name, "params": {...}}.
struct LearnerSpec {
  AlgorithmId algorithm = AlgorithmId::knn;
  Hyperparameters params;

  static LearnerSpec with_defaults(AlgorithmId algorithm);
  nlohmann::json to_json() const;
  static LearnerSpec from_json(const nlohmann::json& j);
  bool operator==(const LearnerSpec&) const = default;
};

/// Every algorithm at its declared defaults, in AlgorithmId order.
std::vector<LearnerSpec> default_roster();

std::vector<LearnerSpec> specs_from_json(const nlohmann::json& array);
nlohmann::json specs_to_json(const std::vector<LearnerSpec>& specs);

}  // namespace trainclean
