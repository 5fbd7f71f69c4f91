#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trainclean/cross_validation.hpp"
#include "trainclean/dataset.hpp"
#include "trainclean/learner.hpp"

namespace trainclean {

/// Mean over runs of held-out accuracy under the protocol's stratified partition.
double cv_accuracy(const Learner& target, const Dataset& data, const Protocol& protocol = {});

/// Paired per-dataset accuracies in percent.
struct PairedResults {
  std::vector<std::string> datasets;
  std::vector<double> baseline;
  std::vector<double> treatment;

  std::size_t size() const { return baseline.size(); }
  void add(std::string name, double bl, double g);
  PairedResults mirrored() const;
};

/// Differences below this magnitude count as ties.
inline constexpr double kTieTolerance = 1e-9;

struct ReductionMetrics {
  std::optional<double> red_err;  // percent; nullopt = NA
  std::optional<double> red_acc;  // percent; nullopt = NA
  int greater = 0;
  int equal = 0;
  int less = 0;
  std::vector<std::string> perfect_baseline;  // datasets hitting the bl = 100 guard

  nlohmann::json to_json() const;
};

ReductionMetrics reduction_metrics(const PairedResults& pairs);

enum class Direction { none, treatment, baseline };
enum class WilcoxonMethod { exact, normal };
std::string to_string(Direction direction);

struct WilcoxonVerdict {
  double w_plus = 0.0;
  double w_minus = 0.0;
  int n_effective = 0;
  double p_value = 1.0;
  bool significant = false;
  Direction direction = Direction::none;
  WilcoxonMethod method = WilcoxonMethod::exact;

  nlohmann::json to_json() const;
};

inline constexpr int kExactWilcoxonLimit = 25;

/// Two-sided signed-ranks test. Zero differences split their ranks evenly between
/// the sums (one dropped when their count is odd); tied magnitudes get average
/// ranks. Uses the exact null distribution up to 25 effective pairs, the normal
/// approximation above. Throws too_few_pairs below 5 pairs.
WilcoxonVerdict wilcoxon(const PairedResults& pairs, double alpha = 0.05);
WilcoxonVerdict wilcoxon_with(const PairedResults& pairs, WilcoxonMethod method, double alpha = 0.05);

/// Text block mirroring one table column: accuracy, %red_err, %red_acc, count, significance.
std::string format_column(const PairedResults& pairs, const ReductionMetrics& metrics,
                          const std::optional<WilcoxonVerdict>& verdict);

}  // namespace trainclean
