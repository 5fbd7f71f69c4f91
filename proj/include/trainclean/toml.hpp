#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace trainclean::toml {

// Minimal TOML reader for experiment configs: bare keys, one level of [tables],
// strings, integers, floats, booleans and (possibly multi-line) arrays of those.

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<std::string, std::int64_t, double, bool, Array> data;
};

/// Flattened document: table keys are "table.key".
using Document = std::map<std::string, Value>;

Document parse(const std::string& text);
Document parse_file(const std::filesystem::path& path);

}  // namespace trainclean::toml
