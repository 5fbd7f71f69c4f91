#include "trainclean/error.hpp"

namespace trainclean {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::io: return "io";
    case ErrorCode::parse: return "parse";
    case ErrorCode::ragged_rows: return "ragged-rows";
    case ErrorCode::single_class: return "single-class";
    case ErrorCode::empty_dataset: return "empty-dataset";
    case ErrorCode::undeclared_value: return "undeclared-value";
    case ErrorCode::missing_class: return "missing-class";
    case ErrorCode::unknown_id: return "unknown-id";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::invalid_hyperparameter: return "invalid-hyperparameter";
    case ErrorCode::empty_training_set: return "empty-training-set";
    case ErrorCode::schema_mismatch: return "schema-mismatch";
    case ErrorCode::empty_ensemble: return "empty-ensemble";
    case ErrorCode::dataset_too_small: return "dataset-too-small";
    case ErrorCode::all_removed: return "all-removed";
    case ErrorCode::cap_exceeded: return "cap-exceeded";
    case ErrorCode::index_mismatch: return "index-mismatch";
    case ErrorCode::too_few_pairs: return "too-few-pairs";
    case ErrorCode::config: return "config";
  }
  return "unknown";
}

}  // namespace trainclean
