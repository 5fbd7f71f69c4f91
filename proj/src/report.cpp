#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "trainclean/error.hpp"
#include "trainclean/harness.hpp"

namespace trainclean {

namespace {

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

std::optional<double> opt_from(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed2(const std::optional<double>& v) {
  if (!v) return "NA";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
      any = true;
    }
  }
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

nlohmann::json cell_to_json(const Cell& cell) {
  nlohmann::json per_phi = nlohmann::json::array();
  for (const auto& [phi, acc] : cell.per_phi) per_phi.push_back({{"phi", phi}, {"accuracy", acc}});
  nlohmann::json j = {{"condition", to_string(cell.condition)},
                      {"target", to_string(cell.target)},
                      {"dataset", cell.dataset},
                      {"accuracy", opt(cell.accuracy)},
                      {"phi", opt(cell.phi)},
                      {"per_phi", per_phi},
                      {"filter_set", cell.filter_set}};
  if (!cell.error.empty()) j["error"] = cell.error;
  return j;
}

Cell cell_from_json(const nlohmann::json& j) {
  Cell cell;
  cell.condition = parse_condition(j.at("condition").get<std::string>());
  cell.target = parse_algorithm(j.at("target").get<std::string>());
  cell.dataset = j.at("dataset").get<std::string>();
  cell.accuracy = opt_from(j.at("accuracy"));
  cell.phi = opt_from(j.value("phi", nlohmann::json()));
  for (const auto& e : j.value("per_phi", nlohmann::json::array()))
    cell.per_phi.emplace_back(e.at("phi").get<double>(), e.at("accuracy").get<double>());
  cell.filter_set = j.value("filter_set", std::vector<std::string>{});
  cell.error = j.value("error", std::string());
  return cell;
}

template <typename T>
void push_unique(std::vector<T>& v, const T& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

}  // namespace

nlohmann::json report_to_json(const ComparisonReport& report) {
  nlohmann::json j;
  j["config"] = report.config;
  j["datasets"] = report.datasets;
  j["targets"] = nlohmann::json::array();
  for (auto t : report.targets) j["targets"].push_back(to_string(t));
  j["conditions"] = nlohmann::json::array();
  for (auto c : report.conditions) j["conditions"].push_back(to_string(c));
  j["cells"] = nlohmann::json::array();
  for (const auto& cell : report.cells) j["cells"].push_back(cell_to_json(cell));
  j["stats"] = nlohmann::json::array();
  for (const auto& row : report.stats) {
    j["stats"].push_back({{"condition", to_string(row.condition)},
                          {"baseline", to_string(row.baseline)},
                          {"target", to_string(row.target)},
                          {"pairs", row.pairs},
                          {"mean_accuracy", row.mean_accuracy},
                          {"baseline_mean", row.baseline_mean},
                          {"metrics", row.metrics.to_json()},
                          {"wilcoxon", row.wilcoxon ? row.wilcoxon->to_json() : nlohmann::json()}});
  }
  if (report.selection) {
    nlohmann::json by_target = nlohmann::json::object();
    for (const auto& [t, row] : report.selection->by_target)
      by_target[to_string(t)] = {{"frequencies", row}, {"cases", report.selection->cases.at(t)}};
    j["selection_frequency"] = {
        {"learners", report.selection->learners}, {"by_target", by_target}, {"all", report.selection->all}};
  } else {
    j["selection_frequency"] = nullptr;
  }
  return j;
}

ComparisonReport report_from_json(const nlohmann::json& j) {
  ComparisonReport report;
  try {
    report.config = j.value("config", nlohmann::json::object());
    report.datasets = j.at("datasets").get<std::vector<std::string>>();
    for (const auto& t : j.at("targets")) report.targets.push_back(parse_algorithm(t.get<std::string>()));
    for (const auto& c : j.at("conditions")) report.conditions.push_back(parse_condition(c.get<std::string>()));
    for (const auto& cell : j.at("cells")) report.cells.push_back(cell_from_json(cell));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, std::string("malformed report: ") + e.what());
  }
  assemble(report);
  return report;
}

std::string report_to_csv(const ComparisonReport& report) {
  std::string out = "condition,target,dataset,accuracy,phi,filter_set,per_phi,error\n";
  for (const auto& cell : report.cells) {
    std::string per_phi;
    for (const auto& [phi, acc] : cell.per_phi) {
      if (!per_phi.empty()) per_phi += ';';
      per_phi += full(phi) + ":" + full(acc);
    }
    std::string filter_set;
    for (const auto& name : cell.filter_set) {
      if (!filter_set.empty()) filter_set += ';';
      filter_set += name;
    }
    out += to_string(cell.condition) + "," + to_string(cell.target) + "," + csv_quote(cell.dataset) + "," +
           (cell.accuracy ? full(*cell.accuracy) : "NA") + "," + (cell.phi ? full(*cell.phi) : "") + "," +
           filter_set + "," + per_phi + "," + csv_quote(cell.error) + "\n";
  }
  return out;
}

ComparisonReport report_from_csv(const std::string& csv, nlohmann::json config) {
  auto rows = csv_rows(csv);
  if (rows.empty() || rows.front().size() != 8 || rows.front()[0] != "condition")
    throw Error(ErrorCode::parse, "report CSV has an unexpected header");
  ComparisonReport report;
  report.config = std::move(config);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 8) throw Error(ErrorCode::ragged_rows, "report CSV row " + std::to_string(r + 1) + " is ragged");
    Cell cell;
    cell.condition = parse_condition(row[0]);
    cell.target = parse_algorithm(row[1]);
    cell.dataset = row[2];
    if (row[3] != "NA") cell.accuracy = std::stod(row[3]);
    if (!row[4].empty()) cell.phi = std::stod(row[4]);
    cell.filter_set = split(row[5], ';');
    for (const auto& entry : split(row[6], ';')) {
      const auto colon = entry.find(':');
      if (colon == std::string::npos) throw Error(ErrorCode::parse, "malformed per_phi entry '" + entry + "'");
      cell.per_phi.emplace_back(std::stod(entry.substr(0, colon)), std::stod(entry.substr(colon + 1)));
    }
    cell.error = row[7];
    push_unique(report.datasets, cell.dataset);
    push_unique(report.targets, cell.target);
    push_unique(report.conditions, cell.condition);
    report.cells.push_back(std::move(cell));
  }
  assemble(report);
  return report;
}

std::string report_to_markdown(const ComparisonReport& report) {
  std::ostringstream md;
  md << "# Comparison report\n\n";
  md << "Datasets: " << report.datasets.size() << ". Accuracies are percentages; counts are greater,equal,less "
        "against the baseline; `*` marks a significant signed-ranks test at 0.05.\n";

  auto find_row = [&](Condition c, Condition baseline, AlgorithmId t) -> const StatsRow* {
    for (const auto& row : report.stats)
      if (row.condition == c && row.baseline == baseline && row.target == t) return &row;
    return nullptr;
  };

  for (AlgorithmId target : report.targets) {
    for (Condition baseline : {Condition::orig, Condition::hpo}) {
      if (std::find(report.conditions.begin(), report.conditions.end(), baseline) == report.conditions.end()) continue;
      bool any = false;
      for (Condition c : report.conditions) any = any || find_row(c, baseline, target);
      if (!any) continue;
      md << "\n## " << to_string(target) << " vs " << to_string(baseline) << "\n\n|";
      for (Condition c : report.conditions) md << " | " << to_string(c);
      md << " |\n|---";
      for (std::size_t i = 0; i < report.conditions.size(); ++i) md << "|---";
      md << "|\n";
      std::vector<std::string> acc, err, red, count;
      for (Condition c : report.conditions) {
        const StatsRow* row = find_row(c, baseline, target);
        std::string mark;
        if (row && row->wilcoxon && row->wilcoxon->significant) mark = "*";
        acc.push_back(fixed2(report.mean_accuracy(c, target)) + mark);
        if (row) {
          err.push_back(fixed2(row->metrics.red_err));
          red.push_back(fixed2(row->metrics.red_acc));
          count.push_back(std::to_string(row->metrics.greater) + "," + std::to_string(row->metrics.equal) + "," +
                          std::to_string(row->metrics.less));
        } else {
          err.push_back("-");
          red.push_back("-");
          count.push_back("-");
        }
      }
      auto line = [&](const char* label, const std::vector<std::string>& values) {
        md << "| " << label;
        for (const auto& v : values) md << " | " << v;
        md << " |\n";
      };
      line("accuracy", acc);
      line("%red_err", err);
      line("%red_acc", red);
      line("count", count);
    }
  }

  if (report.conditions.size() == 1 || report.stats.empty()) {
    md << "\n## Accuracy\n\n| dataset";
    for (AlgorithmId t : report.targets) md << " | " << to_string(t);
    md << " |\n|---";
    for (std::size_t i = 0; i < report.targets.size(); ++i) md << "|---";
    md << "|\n";
    for (Condition c : report.conditions)
      for (const auto& name : report.datasets) {
        md << "| " << name;
        if (report.conditions.size() > 1) md << " (" << to_string(c) << ")";
        for (AlgorithmId t : report.targets) {
          const Cell* cell = report.find(c, t, name);
          md << " | " << fixed2(cell ? cell->accuracy : std::nullopt);
        }
        md << " |\n";
      }
  }

  if (report.selection) {
    const auto& sel = *report.selection;
    md << "\n## Filter selection frequency (adaptive_orig)\n\n| learner";
    for (const auto& [t, row] : sel.by_target) md << " | " << to_string(t);
    md << " | all |\n|---";
    for (std::size_t i = 0; i <= sel.by_target.size(); ++i) md << "|---";
    md << "|\n";
    for (std::size_t i = 0; i <= sel.learners.size(); ++i) {
      md << "| " << (i < sel.learners.size() ? sel.learners[i] : std::string("none"));
      for (const auto& [t, row] : sel.by_target) md << " | " << fixed2(row[i]);
      md << " | " << fixed2(sel.all[i]) << " |\n";
    }
  }

  bool header = false;
  for (const auto& cell : report.cells)
    if (!cell.error.empty()) {
      if (!header) md << "\n## Failed cells\n\n";
      header = true;
      md << "- " << to_string(cell.condition) << " / " << to_string(cell.target) << " / " << cell.dataset << ": "
         << cell.error << "\n";
    }
  return md.str();
}

std::filesystem::path emit_report(const ComparisonReport& report, ReportFormat format,
                                  const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  std::filesystem::path path = out_dir;
  std::string body;
  switch (format) {
    case ReportFormat::json:
      path /= "report.json";
      body = report_to_json(report).dump(2) + "\n";
      break;
    case ReportFormat::csv:
      path /= "report.csv";
      body = report_to_csv(report);
      break;
    case ReportFormat::markdown:
      path /= "report.md";
      body = report_to_markdown(report);
      break;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out << body;
  if (!out) throw Error(ErrorCode::io, "failed writing " + path.string());
  return path;
}

}  // namespace trainclean
