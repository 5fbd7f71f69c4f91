#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trainclean/cross_validation.hpp"
#include "trainclean/hyperparameters.hpp"
#include "trainclean/stats.hpp"

namespace trainclean {

enum class Condition { orig, l_filter, hpo, l_filter_hpo, adaptive_orig, adaptive_hpo };
inline constexpr Condition kAllConditions[] = {Condition::orig,         Condition::l_filter,
                                               Condition::hpo,          Condition::l_filter_hpo,
                                               Condition::adaptive_orig, Condition::adaptive_hpo};
std::string to_string(Condition condition);
Condition parse_condition(const std::string& name);

enum class CandidateSource { roster, auto_cod, file };

struct ExperimentConfig {
  std::vector<std::filesystem::path> corpus;
  std::vector<AlgorithmId> targets;
  std::vector<Condition> conditions;
  std::vector<double> phi_grid{0.5, 0.3, 0.1};
  int runs = 5;
  int folds = 10;
  std::uint64_t seed = 0;
  int hpo_trials = 10;
  CandidateSource candidates = CandidateSource::roster;
  double cut_height = 0.18;
  std::filesystem::path candidate_file;  // CandidateSource::file
  std::string linkage = "average";

  /// Throws config on violated invariants.
  void validate() const;
  nlohmann::json to_json() const;
};

/// Reads a TOML config; relative corpus paths resolve against the config's
/// directory. Unknown keys are errors. TRAINCLEAN_SEED overrides `seed`.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig config_from_toml(const std::string& text, const std::filesystem::path& base_dir = {});

/// One (condition, target, dataset) result. Accuracies are percentages.
struct Cell {
  Condition condition = Condition::orig;
  AlgorithmId target = AlgorithmId::knn;
  std::string dataset;
  std::optional<double> accuracy;
  std::optional<double> phi;                         // filtered conditions: winning phi
  std::vector<std::pair<double, double>> per_phi;    // (phi, accuracy)
  std::vector<std::string> filter_set;               // adaptive: algorithms in F at the winning phi
  std::string error;                                 // non-empty = NA cell
};

struct StatsRow {
  Condition condition = Condition::orig;
  Condition baseline = Condition::orig;
  AlgorithmId target = AlgorithmId::knn;
  int pairs = 0;
  double mean_accuracy = 0.0;
  double baseline_mean = 0.0;
  ReductionMetrics metrics;
  std::optional<WilcoxonVerdict> wilcoxon;
};

struct SelectionFrequency {
  std::vector<std::string> learners;  // candidate algorithm names
  /// Per target: fraction (percent) of adaptive_orig cases selecting each learner,
  /// in `learners` order, followed by the "none" percentage.
  std::map<AlgorithmId, std::vector<double>> by_target;
  std::vector<double> all;  // mean over targets
  std::map<AlgorithmId, int> cases;
};

struct ComparisonReport {
  nlohmann::json config;
  std::vector<std::string> datasets;
  std::vector<AlgorithmId> targets;
  std::vector<Condition> conditions;
  std::vector<Cell> cells;
  std::vector<StatsRow> stats;
  std::optional<SelectionFrequency> selection;

  const Cell* find(Condition condition, AlgorithmId target, const std::string& dataset) const;
  /// Mean accuracy over datasets with a value; nullopt when none.
  std::optional<double> mean_accuracy(Condition condition, AlgorithmId target) const;
};

/// Recomputes stats rows and selection frequencies from the cells.
void assemble(ComparisonReport& report);

ComparisonReport run_experiment(const ExperimentConfig& config);

enum class ReportFormat { json, csv, markdown };

nlohmann::json report_to_json(const ComparisonReport& report);
ComparisonReport report_from_json(const nlohmann::json& j);
std::string report_to_csv(const ComparisonReport& report);
/// Rebuilds a report from its flattened cells (aggregates recomputed).
ComparisonReport report_from_csv(const std::string& csv, nlohmann::json config = nlohmann::json::object());
std::string report_to_markdown(const ComparisonReport& report);

/// Writes report.<ext> into out_dir; returns the written path.
std::filesystem::path emit_report(const ComparisonReport& report, ReportFormat format,
                                  const std::filesystem::path& out_dir);

}  // namespace trainclean
