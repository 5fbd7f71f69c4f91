#include "trainclean/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "trainclean/error.hpp"

namespace trainclean {

namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

/// Splits on the separator outside single or double quotes; strips the quotes.
std::vector<std::string> split_fields(std::string_view line, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  char quote = 0;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == '\\' && i + 1 < line.size()) {
        cur += line[++i];
      } else if (c == quote) {
        quote = 0;
      } else {
        cur += c;
      }
    } else if (c == '"' || c == '\'') {
      quote = c;
      quoted = true;
    } else if (c == sep) {
      out.push_back(quoted ? cur : trim(cur));
      cur.clear();
      quoted = false;
    } else {
      cur += c;
    }
  }
  out.push_back(quoted ? cur : trim(cur));
  return out;
}

std::optional<double> parse_number(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
  return value;
}

bool is_missing_token(const std::string& cell) { return cell.empty() || cell == "?"; }

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
  return in;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quote_name(const std::string& name) {
  if (!name.empty() && name.find_first_of(" ,'\"{}%\t") == std::string::npos) return name;
  std::string out = "'";
  for (char c : name) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  auto in = open_input(path);
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) {
      header = split_fields(line);
      break;
    }
  }
  if (header.size() < 2) throw Error(ErrorCode::empty_dataset, path.string() + " has no usable header");

  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != header.size())
      throw Error(ErrorCode::ragged_rows, path.string() + ":" + std::to_string(line_no) + " has " +
                                              std::to_string(fields.size()) + " cells, expected " +
                                              std::to_string(header.size()));
    rows.push_back(std::move(fields));
  }
  if (rows.empty()) throw Error(ErrorCode::empty_dataset, path.string() + " has no data rows");

  std::size_t label_col = header.size() - 1;
  if (options.label_column) {
    auto it = std::find(header.begin(), header.end(), *options.label_column);
    if (it == header.end()) throw Error(ErrorCode::missing_class, "no column named " + *options.label_column);
    label_col = static_cast<std::size_t>(it - header.begin());
  }
  for (const auto& [name, kind] : options.kinds)
    if (std::find(header.begin(), header.end(), name) == header.end())
      throw Error(ErrorCode::invalid_argument, "schema hint for unknown column " + name);

  std::vector<FeatureSpec> features;
  std::vector<std::size_t> columns;
  std::vector<std::unordered_map<std::string, std::size_t>> lookup;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == label_col) continue;
    FeatureSpec spec{header[c], FeatureKind::numeric, {}};
    if (auto hint = options.kinds.find(header[c]); hint != options.kinds.end()) {
      spec.kind = hint->second;
    } else {
      const bool all_numeric = std::all_of(rows.begin(), rows.end(), [&](const auto& row) {
        return is_missing_token(row[c]) || parse_number(row[c]).has_value();
      });
      spec.kind = all_numeric ? FeatureKind::numeric : FeatureKind::nominal;
    }
    std::unordered_map<std::string, std::size_t> index;
    if (spec.kind == FeatureKind::nominal) {
      for (const auto& row : rows) {
        if (is_missing_token(row[c])) continue;
        if (index.emplace(row[c], spec.categories.size()).second) spec.categories.push_back(row[c]);
      }
      if (spec.categories.empty()) spec.categories.push_back("?");
    }
    features.push_back(std::move(spec));
    columns.push_back(c);
    lookup.push_back(std::move(index));
  }

  std::vector<std::string> classes;
  std::unordered_map<std::string, int> class_index;
  std::vector<Instance> instances;
  instances.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (is_missing_token(row[label_col]))
      throw Error(ErrorCode::missing_class, "row " + std::to_string(r + 2) + " has no label");
    auto [it, inserted] = class_index.emplace(row[label_col], static_cast<int>(classes.size()));
    if (inserted) classes.push_back(row[label_col]);
    Instance inst{r, {}, it->second};
    inst.values.reserve(features.size());
    for (std::size_t f = 0; f < features.size(); ++f) {
      const std::string& cell = row[columns[f]];
      if (is_missing_token(cell)) {
        inst.values.push_back(kMissing);
      } else if (features[f].kind == FeatureKind::nominal) {
        inst.values.push_back(static_cast<double>(lookup[f].at(cell)));
      } else {
        auto v = parse_number(cell);
        if (!v) throw Error(ErrorCode::parse, "non-numeric cell '" + cell + "' in numeric column " + features[f].name);
        inst.values.push_back(*v);
      }
    }
    instances.push_back(std::move(inst));
  }
  if (classes.size() < 2) throw Error(ErrorCode::single_class, path.string() + " has a single class");
  return Dataset(std::move(features), std::move(classes), std::move(instances));
}

Dataset load_arff(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  bool seen_relation = false;
  bool in_data = false;
  std::vector<FeatureSpec> attributes;
  std::vector<std::unordered_map<std::string, std::size_t>> lookup;
  std::vector<InstanceId> declared_ids;
  std::vector<std::vector<std::string>> rows;

  auto malformed = [&](const std::string& what) {
    return Error(ErrorCode::parse, path.string() + ":" + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::string text = trim(line);
    if (text.empty()) continue;
    if (text[0] == '%') {
      if (text.rfind("%@ids", 0) == 0) {
        for (const auto& tok : split_fields(trim(text.substr(5)))) {
          if (tok.empty()) continue;
          auto v = parse_number(tok);
          if (!v || *v < 0) throw malformed("bad id list");
          declared_ids.push_back(static_cast<InstanceId>(*v));
        }
      }
      continue;
    }
    if (in_data) {
      if (text[0] == '{') throw malformed("sparse ARFF is not supported");
      rows.push_back(split_fields(text));
      continue;
    }
    if (text[0] != '@') throw malformed("expected a declaration");
    const auto space = text.find_first_of(" \t");
    const std::string keyword = lower(text.substr(0, space));
    const std::string rest = space == std::string::npos ? std::string() : trim(text.substr(space));
    if (keyword == "@relation") {
      seen_relation = true;
    } else if (keyword == "@attribute") {
      if (!seen_relation) throw malformed("@attribute before @relation");
      std::string name;
      std::size_t pos = 0;
      if (!rest.empty() && (rest[0] == '\'' || rest[0] == '"')) {
        const char q = rest[0];
        pos = 1;
        while (pos < rest.size() && rest[pos] != q) {
          if (rest[pos] == '\\' && pos + 1 < rest.size()) ++pos;
          name += rest[pos++];
        }
        if (pos >= rest.size()) throw malformed("unterminated attribute name");
        ++pos;
      } else {
        pos = rest.find_first_of(" \t{");
        if (pos == std::string::npos) throw malformed("attribute without type");
        name = rest.substr(0, pos);
      }
      const std::string type = trim(rest.substr(pos));
      FeatureSpec spec{name, FeatureKind::numeric, {}};
      std::unordered_map<std::string, std::size_t> index;
      if (!type.empty() && type.front() == '{') {
        if (type.back() != '}') throw malformed("unterminated nominal declaration");
        spec.kind = FeatureKind::nominal;
        for (auto& v : split_fields(type.substr(1, type.size() - 2))) {
          if (v.empty()) continue;
          if (!index.emplace(v, spec.categories.size()).second) throw malformed("duplicate nominal value " + v);
          spec.categories.push_back(v);
        }
        if (spec.categories.empty()) throw malformed("empty nominal declaration");
      } else {
        const std::string t = lower(type);
        if (t != "numeric" && t != "real" && t != "integer") throw malformed("unsupported attribute type " + type);
      }
      attributes.push_back(std::move(spec));
      lookup.push_back(std::move(index));
    } else if (keyword == "@data") {
      if (!seen_relation) throw malformed("@data before @relation");
      in_data = true;
    } else {
      throw malformed("unknown declaration " + keyword);
    }
  }
  if (!in_data) throw Error(ErrorCode::parse, path.string() + ": missing @data section");
  if (attributes.empty() || attributes.back().kind != FeatureKind::nominal)
    throw Error(ErrorCode::missing_class, path.string() + ": no nominal class attribute");
  if (rows.empty()) throw Error(ErrorCode::empty_dataset, path.string() + " has no data rows");
  if (!declared_ids.empty() && declared_ids.size() != rows.size())
    throw Error(ErrorCode::parse, path.string() + ": id list does not match the row count");

  FeatureSpec class_attr = std::move(attributes.back());
  auto class_lookup = std::move(lookup.back());
  attributes.pop_back();
  lookup.pop_back();

  std::vector<Instance> instances;
  instances.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != attributes.size() + 1)
      throw Error(ErrorCode::ragged_rows, path.string() + ": data row " + std::to_string(r + 1) + " has " +
                                              std::to_string(row.size()) + " cells");
    const std::string& label = row.back();
    if (is_missing_token(label)) throw Error(ErrorCode::missing_class, "data row " + std::to_string(r + 1) + " has no class");
    auto cls = class_lookup.find(label);
    if (cls == class_lookup.end()) throw Error(ErrorCode::undeclared_value, "undeclared class value " + label);
    Instance inst{declared_ids.empty() ? r : declared_ids[r], {}, static_cast<int>(cls->second)};
    inst.values.reserve(attributes.size());
    for (std::size_t f = 0; f < attributes.size(); ++f) {
      const std::string& cell = row[f];
      if (is_missing_token(cell)) {
        inst.values.push_back(kMissing);
      } else if (attributes[f].kind == FeatureKind::nominal) {
        auto it = lookup[f].find(cell);
        if (it == lookup[f].end())
          throw Error(ErrorCode::undeclared_value, "value '" + cell + "' is not declared for " + attributes[f].name);
        inst.values.push_back(static_cast<double>(it->second));
      } else {
        auto v = parse_number(cell);
        if (!v) throw Error(ErrorCode::parse, "non-numeric cell '" + cell + "' for " + attributes[f].name);
        inst.values.push_back(*v);
      }
    }
    instances.push_back(std::move(inst));
  }
  return Dataset(std::move(attributes), std::move(class_attr.categories), std::move(instances));
}

Dataset load_dataset(const std::filesystem::path& path) {
  if (lower(path.extension().string()) == ".arff") return load_arff(path);
  return load_csv(path);
}

void write_arff(const Dataset& data, const std::filesystem::path& path, const std::string& relation) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out << "@relation " << quote_name(relation) << "\n\n";
  auto nominal_list = [](const std::vector<std::string>& values) {
    std::string s = "{";
    for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + quote_name(values[i]);
    return s + "}";
  };
  for (const auto& f : data.features())
    out << "@attribute " << quote_name(f.name) << ' '
        << (f.kind == FeatureKind::numeric ? std::string("numeric") : nominal_list(f.categories)) << '\n';
  out << "@attribute class " << nominal_list(data.classes()) << "\n\n";
  out << "%@ids ";
  for (std::size_t i = 0; i < data.size(); ++i) out << (i ? "," : "") << data[i].id;
  out << "\n@data\n";
  for (const auto& inst : data.instances()) {
    for (std::size_t f = 0; f < inst.values.size(); ++f) {
      const double v = inst.values[f];
      if (is_missing(v))
        out << '?';
      else if (data.features()[f].kind == FeatureKind::nominal)
        out << quote_name(data.features()[f].categories[static_cast<std::size_t>(v)]);
      else
        out << format_double(v);
      out << ',';
    }
    out << quote_name(data.classes()[inst.label]) << '\n';
  }
  if (!out) throw Error(ErrorCode::io, "failed writing " + path.string());
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  for (const auto& f : data.features()) out << f.name << ',';
  out << "class\n";
  for (const auto& inst : data.instances()) {
    for (std::size_t f = 0; f < inst.values.size(); ++f) {
      const double v = inst.values[f];
      if (is_missing(v))
        out << '?';
      else if (data.features()[f].kind == FeatureKind::nominal)
        out << data.features()[f].categories[static_cast<std::size_t>(v)];
      else
        out << format_double(v);
      out << ',';
    }
    out << data.classes()[inst.label] << '\n';
  }
  if (!out) throw Error(ErrorCode::io, "failed writing " + path.string());
}

}  // namespace trainclean
