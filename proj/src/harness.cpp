#include "trainclean/harness.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>

#include "trainclean/diversity.hpp"
#include "trainclean/error.hpp"
#include "trainclean/filtering.hpp"
#include "trainclean/hpo.hpp"
#include "trainclean/io.hpp"
#include "trainclean/parallel.hpp"
#include "trainclean/random.hpp"
#include "trainclean/toml.hpp"

namespace trainclean {

std::string to_string(Condition condition) {
  switch (condition) {
    case Condition::orig: return "orig";
    case Condition::l_filter: return "l_filter";
    case Condition::hpo: return "hpo";
    case Condition::l_filter_hpo: return "l_filter_hpo";
    case Condition::adaptive_orig: return "adaptive_orig";
    case Condition::adaptive_hpo: return "adaptive_hpo";
  }
  return "orig";
}

Condition parse_condition(const std::string& name) {
  for (Condition c : kAllConditions)
    if (to_string(c) == name) return c;
  throw Error(ErrorCode::config, "unknown condition '" + name + "'");
}

namespace {

std::string candidate_source_name(CandidateSource source) {
  switch (source) {
    case CandidateSource::roster: return "roster";
    case CandidateSource::auto_cod: return "auto-cod";
    case CandidateSource::file: return "file";
  }
  return "roster";
}

}  // namespace

void ExperimentConfig::validate() const {
  if (corpus.empty()) throw Error(ErrorCode::config, "corpus must not be empty");
  if (targets.empty()) throw Error(ErrorCode::config, "targets must not be empty");
  if (conditions.empty()) throw Error(ErrorCode::config, "conditions must not be empty");
  if (std::set<Condition>(conditions.begin(), conditions.end()).size() != conditions.size())
    throw Error(ErrorCode::config, "conditions contain duplicates");
  if (phi_grid.empty()) throw Error(ErrorCode::config, "phi_grid must not be empty");
  for (double phi : phi_grid)
    if (!(phi > 0.0 && phi <= 1.0)) throw Error(ErrorCode::config, "phi values must lie in (0, 1]");
  if (runs < 1) throw Error(ErrorCode::config, "runs must be at least 1");
  if (folds < 2) throw Error(ErrorCode::config, "folds must be at least 2");
  if (hpo_trials < 1) throw Error(ErrorCode::config, "hpo_trials must be at least 1");
  if (!(cut_height >= 0.0)) throw Error(ErrorCode::config, "cut_height must be non-negative");
  if (candidates == CandidateSource::file && candidate_file.empty())
    throw Error(ErrorCode::config, "candidates.file is required when candidates.source = \"file\"");
  parse_linkage(linkage);
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["corpus"] = nlohmann::json::array();
  for (const auto& p : corpus) j["corpus"].push_back(p.generic_string());
  j["targets"] = nlohmann::json::array();
  for (auto t : targets) j["targets"].push_back(to_string(t));
  j["conditions"] = nlohmann::json::array();
  for (auto c : conditions) j["conditions"].push_back(to_string(c));
  j["phi_grid"] = phi_grid;
  j["protocol"] = {{"runs", runs}, {"folds", folds}, {"seed", seed}};
  j["hpo_trials"] = hpo_trials;
  j["candidates"] = {{"source", candidate_source_name(candidates)},
                     {"cut_height", cut_height},
                     {"linkage", linkage},
                     {"file", candidate_file.generic_string()}};
  return j;
}

namespace {

const toml::Value* take(toml::Document& doc, std::set<std::string>& used, const std::string& key) {
  auto it = doc.find(key);
  if (it == doc.end()) return nullptr;
  used.insert(key);
  return &it->second;
}

std::string as_string(const toml::Value& v, const std::string& key) {
  if (auto s = std::get_if<std::string>(&v.data)) return *s;
  throw Error(ErrorCode::config, key + " must be a string");
}

std::int64_t as_int(const toml::Value& v, const std::string& key) {
  if (auto i = std::get_if<std::int64_t>(&v.data)) return *i;
  throw Error(ErrorCode::config, key + " must be an integer");
}

double as_real(const toml::Value& v, const std::string& key) {
  if (auto d = std::get_if<double>(&v.data)) return *d;
  if (auto i = std::get_if<std::int64_t>(&v.data)) return static_cast<double>(*i);
  throw Error(ErrorCode::config, key + " must be a number");
}

const toml::Array& as_array(const toml::Value& v, const std::string& key) {
  if (auto a = std::get_if<toml::Array>(&v.data)) return *a;
  throw Error(ErrorCode::config, key + " must be an array");
}

std::uint64_t parse_seed(const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used, 10);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text.front() == '-')
    throw Error(ErrorCode::config, "TRAINCLEAN_SEED must be a non-negative integer");
  return v;
}

}  // namespace

ExperimentConfig config_from_toml(const std::string& text, const std::filesystem::path& base_dir) {
  toml::Document doc = toml::parse(text);
  std::set<std::string> used;
  ExperimentConfig config;

  if (auto v = take(doc, used, "corpus"))
    for (const auto& item : as_array(*v, "corpus")) {
      std::filesystem::path p = as_string(item, "corpus");
      config.corpus.push_back(p.is_relative() && !base_dir.empty() ? base_dir / p : p);
    }
  if (auto v = take(doc, used, "targets"))
    for (const auto& item : as_array(*v, "targets")) {
      try {
        config.targets.push_back(parse_algorithm(as_string(item, "targets")));
      } catch (const Error& e) {
        throw Error(ErrorCode::config, e.what());
      }
    }
  if (auto v = take(doc, used, "conditions"))
    for (const auto& item : as_array(*v, "conditions")) config.conditions.push_back(parse_condition(as_string(item, "conditions")));
  if (auto v = take(doc, used, "phi_grid")) {
    config.phi_grid.clear();
    for (const auto& item : as_array(*v, "phi_grid")) config.phi_grid.push_back(as_real(item, "phi_grid"));
  }
  if (auto v = take(doc, used, "hpo_trials")) config.hpo_trials = static_cast<int>(as_int(*v, "hpo_trials"));
  if (auto v = take(doc, used, "protocol.runs")) config.runs = static_cast<int>(as_int(*v, "protocol.runs"));
  if (auto v = take(doc, used, "protocol.folds")) config.folds = static_cast<int>(as_int(*v, "protocol.folds"));
  if (auto v = take(doc, used, "protocol.seed")) {
    const auto seed = as_int(*v, "protocol.seed");
    if (seed < 0) throw Error(ErrorCode::config, "protocol.seed must be non-negative");
    config.seed = static_cast<std::uint64_t>(seed);
  }
  if (auto v = take(doc, used, "candidates.source")) {
    const std::string source = as_string(*v, "candidates.source");
    if (source == "roster")
      config.candidates = CandidateSource::roster;
    else if (source == "auto-cod")
      config.candidates = CandidateSource::auto_cod;
    else if (source == "file")
      config.candidates = CandidateSource::file;
    else
      throw Error(ErrorCode::config, "unknown candidates.source '" + source + "'");
  }
  if (auto v = take(doc, used, "candidates.cut_height")) config.cut_height = as_real(*v, "candidates.cut_height");
  if (auto v = take(doc, used, "candidates.linkage")) config.linkage = as_string(*v, "candidates.linkage");
  if (auto v = take(doc, used, "candidates.file")) {
    std::filesystem::path p = as_string(*v, "candidates.file");
    config.candidate_file = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
  for (const auto& [key, value] : doc)
    if (!used.count(key)) throw Error(ErrorCode::config, "unknown config key '" + key + "'");

  if (const char* env = std::getenv("TRAINCLEAN_SEED"); env && *env) config.seed = parse_seed(env);
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open config " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return config_from_toml(text, path.parent_path());
}

const Cell* ComparisonReport::find(Condition condition, AlgorithmId target, const std::string& dataset) const {
  for (const auto& cell : cells)
    if (cell.condition == condition && cell.target == target && cell.dataset == dataset) return &cell;
  return nullptr;
}

std::optional<double> ComparisonReport::mean_accuracy(Condition condition, AlgorithmId target) const {
  double sum = 0.0;
  int n = 0;
  for (const auto& cell : cells)
    if (cell.condition == condition && cell.target == target && cell.accuracy) {
      sum += *cell.accuracy;
      ++n;
    }
  if (!n) return std::nullopt;
  return sum / n;
}

namespace {

bool contains(const std::vector<Condition>& conditions, Condition c) {
  return std::find(conditions.begin(), conditions.end(), c) != conditions.end();
}

std::optional<StatsRow> stats_row(const ComparisonReport& report, Condition condition, Condition baseline,
                                  AlgorithmId target) {
  PairedResults pairs;
  for (const auto& name : report.datasets) {
    const Cell* g = report.find(condition, target, name);
    const Cell* bl = report.find(baseline, target, name);
    if (g && bl && g->accuracy && bl->accuracy) pairs.add(name, *bl->accuracy, *g->accuracy);
  }
  StatsRow row;
  row.condition = condition;
  row.baseline = baseline;
  row.target = target;
  row.pairs = static_cast<int>(pairs.size());
  if (pairs.size()) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      row.mean_accuracy += pairs.treatment[i];
      row.baseline_mean += pairs.baseline[i];
    }
    row.mean_accuracy /= static_cast<double>(pairs.size());
    row.baseline_mean /= static_cast<double>(pairs.size());
  }
  row.metrics = reduction_metrics(pairs);
  if (pairs.size() >= 5) row.wilcoxon = wilcoxon(pairs);
  return row;
}

}  // namespace

void assemble(ComparisonReport& report) {
  report.stats.clear();
  const bool has_orig = contains(report.conditions, Condition::orig);
  const bool has_hpo = contains(report.conditions, Condition::hpo);
  for (AlgorithmId target : report.targets)
    for (Condition c : report.conditions) {
      if (c == Condition::orig) continue;
      if (has_orig) report.stats.push_back(*stats_row(report, c, Condition::orig, target));
      const bool table3 =
          c == Condition::l_filter_hpo || c == Condition::adaptive_orig || c == Condition::adaptive_hpo;
      if (table3 && has_hpo) report.stats.push_back(*stats_row(report, c, Condition::hpo, target));
    }

  report.selection.reset();
  if (!contains(report.conditions, Condition::adaptive_orig)) return;
  SelectionFrequency sel;
  if (report.config.contains("candidate_names")) {
    for (const auto& name : report.config["candidate_names"]) {
      const std::string s = name.get<std::string>();
      if (std::find(sel.learners.begin(), sel.learners.end(), s) == sel.learners.end()) sel.learners.push_back(s);
    }
  } else {
    std::set<std::string> names;
    for (const auto& cell : report.cells) names.insert(cell.filter_set.begin(), cell.filter_set.end());
    sel.learners.assign(names.begin(), names.end());
  }
  const std::size_t width = sel.learners.size() + 1;
  sel.all.assign(width, 0.0);
  int targets_with_cases = 0;
  for (AlgorithmId target : report.targets) {
    std::vector<double> row(width, 0.0);
    int cases = 0;
    for (const auto& cell : report.cells) {
      if (cell.condition != Condition::adaptive_orig || cell.target != target || !cell.accuracy) continue;
      ++cases;
      if (cell.filter_set.empty()) row.back() += 1.0;
      for (std::size_t i = 0; i < sel.learners.size(); ++i)
        if (std::find(cell.filter_set.begin(), cell.filter_set.end(), sel.learners[i]) != cell.filter_set.end())
          row[i] += 1.0;
    }
    if (cases)
      for (double& v : row) v = v / cases * 100.0;
    sel.cases[target] = cases;
    if (cases) {
      ++targets_with_cases;
      for (std::size_t i = 0; i < width; ++i) sel.all[i] += row[i];
    }
    sel.by_target[target] = std::move(row);
  }
  if (targets_with_cases)
    for (double& v : sel.all) v /= targets_with_cases;
  report.selection = std::move(sel);
}

namespace {

struct DatasetState {
  std::string name;
  std::unique_ptr<FilterContext> context;
  std::string load_error;
  // HPO-optimized spec per algorithm, or the failure message.
  std::map<AlgorithmId, std::optional<HpoResult>> hpo;
  std::map<AlgorithmId, std::string> hpo_error;
};

std::vector<LearnerSpec> resolve_candidates(const ExperimentConfig& config, const std::vector<DatasetState>& states) {
  switch (config.candidates) {
    case CandidateSource::roster: return default_roster();
    case CandidateSource::file: {
      std::ifstream in(config.candidate_file);
      if (!in) throw Error(ErrorCode::io, "cannot open candidate file " + config.candidate_file.string());
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse, std::string("candidate file: ") + e.what());
      }
      auto specs = specs_from_json(j);
      if (specs.empty()) throw Error(ErrorCode::empty_ensemble, "candidate file lists no learners");
      return specs;
    }
    case CandidateSource::auto_cod: {
      std::vector<Dataset> corpus;
      for (const auto& s : states)
        if (s.context) corpus.push_back(s.context->data());
      const Protocol protocol{config.runs, config.folds, derive_seed(config.seed, {tag("cod")})};
      const auto roster = default_roster();
      const CodMatrix matrix = cod_matrix(make_ensemble(roster), corpus, protocol);
      const Ensemble chosen = cut_and_select(agglomerate(matrix, parse_linkage(config.linkage)), matrix, config.cut_height);
      std::vector<LearnerSpec> specs;
      for (const auto& learner : chosen) specs.push_back(LearnerSpec::from_json(learner->describe()));
      return specs;
    }
  }
  return default_roster();
}

std::pair<double, double> best_over_grid(const std::vector<std::pair<double, double>>& per_phi) {
  std::pair<double, double> best = per_phi.front();
  for (const auto& entry : per_phi)
    if (entry.second > best.second) best = entry;
  return best;
}

}  // namespace

ComparisonReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::size_t D = config.corpus.size();
  std::vector<DatasetState> states(D);
  parallel_for(D, [&](std::size_t d) {
    states[d].name = config.corpus[d].stem().string();
    try {
      Dataset data = load_dataset(config.corpus[d]);
      const Protocol protocol{config.runs, config.folds, derive_seed(config.seed, {d, tag("protocol")})};
      states[d].context = std::make_unique<FilterContext>(std::move(data), protocol);
    } catch (const std::exception& e) {
      states[d].load_error = e.what();
    }
  });
  std::set<std::string> seen;
  for (auto& s : states)
    if (!seen.insert(s.name).second) throw Error(ErrorCode::config, "duplicate dataset name '" + s.name + "'");

  const bool needs_candidates = contains(config.conditions, Condition::l_filter) ||
                                contains(config.conditions, Condition::l_filter_hpo) ||
                                contains(config.conditions, Condition::adaptive_orig) ||
                                contains(config.conditions, Condition::adaptive_hpo);
  std::vector<LearnerSpec> candidates;
  if (needs_candidates) candidates = resolve_candidates(config, states);

  // HPO results each condition may need, computed once per (dataset, algorithm).
  std::set<AlgorithmId> hpo_algorithms;
  if (contains(config.conditions, Condition::hpo) || contains(config.conditions, Condition::l_filter_hpo) ||
      contains(config.conditions, Condition::adaptive_hpo))
    hpo_algorithms.insert(config.targets.begin(), config.targets.end());
  if (contains(config.conditions, Condition::l_filter_hpo) || contains(config.conditions, Condition::adaptive_hpo))
    for (const auto& spec : candidates) hpo_algorithms.insert(spec.algorithm);
  const std::vector<AlgorithmId> hpo_list(hpo_algorithms.begin(), hpo_algorithms.end());
  for (auto& s : states)
    for (AlgorithmId a : hpo_list) s.hpo[a] = std::nullopt;
  parallel_for(D * hpo_list.size(), [&](std::size_t job) {
    auto& s = states[job / hpo_list.size()];
    const AlgorithmId a = hpo_list[job % hpo_list.size()];
    if (!s.context) return;
    try {
      s.hpo[a] = random_search(a, s.context->data(), config.hpo_trials, s.context->protocol());
    } catch (const std::exception& e) {
      s.hpo_error[a] = e.what();
    }
  });

  auto hpo_spec = [&](DatasetState& s, AlgorithmId a) {
    const auto& result = s.hpo.at(a);
    if (!result) throw Error(ErrorCode::invalid_argument, "hyper-parameter search failed: " + s.hpo_error[a]);
    return result->best_spec();
  };

  ComparisonReport report;
  report.config = config.to_json();
  report.config["candidate_names"] = nlohmann::json::array();
  for (const auto& spec : candidates) report.config["candidate_names"].push_back(to_string(spec.algorithm));
  report.config["candidates"]["resolved"] = specs_to_json(candidates);
  for (const auto& s : states) report.datasets.push_back(s.name);
  report.targets = config.targets;
  report.conditions = config.conditions;

  const std::size_t T = config.targets.size(), C = config.conditions.size();
  report.cells.resize(D * T * C);
  parallel_for(D * T * C, [&](std::size_t job) {
    const std::size_t d = job / (T * C), t = (job / C) % T, c = job % C;
    DatasetState& s = states[d];
    Cell& cell = report.cells[job];
    cell.dataset = s.name;
    cell.target = config.targets[t];
    cell.condition = config.conditions[c];
    if (!s.context) {
      cell.error = s.load_error;
      return;
    }
    FilterContext& ctx = *s.context;
    try {
      const AlgorithmId target = cell.target;
      switch (cell.condition) {
        case Condition::orig:
          cell.accuracy = 100.0 * ctx.run_la(*make_learner(LearnerSpec::with_defaults(target)), {}, 1.0);
          break;
        case Condition::hpo: {
          const auto& result = s.hpo.at(target);
          if (!result) throw Error(ErrorCode::invalid_argument, "hyper-parameter search failed: " + s.hpo_error[target]);
          cell.accuracy = 100.0 * result->best_trial().accuracy;
          break;
        }
        case Condition::l_filter:
        case Condition::l_filter_hpo: {
          const bool tuned = cell.condition == Condition::l_filter_hpo;
          const auto learner = make_learner(tuned ? hpo_spec(s, target) : LearnerSpec::with_defaults(target));
          Ensemble filter;
          for (const auto& spec : candidates) filter.push_back(make_learner(tuned ? hpo_spec(s, spec.algorithm) : spec));
          for (double phi : config.phi_grid) cell.per_phi.emplace_back(phi, 100.0 * ctx.run_la(*learner, filter, phi));
          std::tie(cell.phi.emplace(), cell.accuracy.emplace()) = best_over_grid(cell.per_phi);
          break;
        }
        case Condition::adaptive_orig:
        case Condition::adaptive_hpo: {
          const bool tuned = cell.condition == Condition::adaptive_hpo;
          const auto learner = make_learner(tuned ? hpo_spec(s, target) : LearnerSpec::with_defaults(target));
          Ensemble pool;
          for (const auto& spec : candidates) pool.push_back(make_learner(tuned ? hpo_spec(s, spec.algorithm) : spec));
          std::vector<std::vector<std::string>> sets;
          for (double phi : config.phi_grid) {
            const FilterOutcome out = adaptive_filter(ctx, *learner, pool, phi);
            cell.per_phi.emplace_back(phi, 100.0 * *out.final_accuracy);
            std::vector<std::string> names;
            for (const auto& l : out.ensemble) names.push_back(l->describe().at("algorithm").get<std::string>());
            sets.push_back(std::move(names));
          }
          std::tie(cell.phi.emplace(), cell.accuracy.emplace()) = best_over_grid(cell.per_phi);
          for (std::size_t i = 0; i < cell.per_phi.size(); ++i)
            if (cell.per_phi[i].first == *cell.phi) {
              cell.filter_set = sets[i];
              break;
            }
          break;
        }
      }
    } catch (const std::exception& e) {
      cell.accuracy.reset();
      cell.phi.reset();
      cell.per_phi.clear();
      cell.filter_set.clear();
      cell.error = e.what();
    }
  });
  assemble(report);
  return report;
}

}  // namespace trainclean
