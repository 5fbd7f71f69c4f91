#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trainclean {

enum class ErrorCode {
  io,
  parse,
  ragged_rows,
  single_class,
  empty_dataset,
  undeclared_value,
  missing_class,
  unknown_id,
  invalid_argument,
  invalid_hyperparameter,
  empty_training_set,
  schema_mismatch,
  empty_ensemble,
  dataset_too_small,
  all_removed,
  cap_exceeded,
  index_mismatch,
  too_few_pairs,
  config,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace trainclean
