#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "trainclean/dataset.hpp"

namespace trainclean {

struct CsvOptions {
  /// Per-column kind overrides keyed by header name.
  std::map<std::string, FeatureKind> kinds;
  /// Label column name; defaults to the last column.
  std::optional<std::string> label_column;
};

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
Dataset load_arff(const std::filesystem::path& path);

/// Dispatches on extension (.arff, otherwise CSV).
Dataset load_dataset(const std::filesystem::path& path);

/// Native format: ARFF with the instance ids recorded in a `%@ids` comment so that
/// a re-read restores them. Values are written with round-trip precision.
void write_arff(const Dataset& data, const std::filesystem::path& path,
                const std::string& relation = "trainclean");
void write_csv(const Dataset& data, const std::filesystem::path& path);

}  // namespace trainclean
