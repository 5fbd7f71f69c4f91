// trainclean command-line driver.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "trainclean/trainclean.hpp"

namespace fs = std::filesystem;
using namespace trainclean;

namespace {

struct ProtocolArgs {
  int runs = 5;
  int folds = 10;
  std::uint64_t seed = 0;

  void attach(CLI::App* app) {
    app->add_option("--runs", runs, "cross-validation repetitions")->check(CLI::PositiveNumber);
    app->add_option("--folds", folds, "folds per run")->check(CLI::Range(2, 1000));
    app->add_option("--seed", seed, "protocol seed");
  }
  Protocol protocol() const { return {runs, folds, seed}; }
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, path.string() + ": " + e.what());
  }
}

// "roster", a comma-separated list of algorithm names, or a JSON file of LearnerSpec.
std::vector<LearnerSpec> parse_specs(const std::string& text) {
  if (text == "roster") return default_roster();
  if (fs::exists(text)) return specs_from_json(read_json(text));
  std::vector<LearnerSpec> specs;
  std::stringstream in(text);
  std::string name;
  while (std::getline(in, name, ','))
    if (!name.empty()) specs.push_back(LearnerSpec::with_defaults(parse_algorithm(name)));
  if (specs.empty()) throw Error(ErrorCode::empty_ensemble, "no learners given");
  return specs;
}

LearnerSpec parse_spec(const std::string& text) {
  if (fs::exists(text)) return LearnerSpec::from_json(read_json(text));
  return LearnerSpec::with_defaults(parse_algorithm(text));
}

void write_dataset(const Dataset& data, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  if (path.extension() == ".csv")
    write_csv(data, path);
  else
    write_arff(data, path);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detrimental-instance filtering and hyper-parameter optimization experiments"};
  app.require_subcommand(1);
  int jobs = 1;
  app.add_option("--jobs,-j", jobs, "worker threads")->check(CLI::PositiveNumber);

  // run
  auto* run = app.add_subcommand("run", "run a full comparison experiment from a TOML config");
  fs::path config_path, out_dir;
  run->add_option("--config", config_path, "experiment config")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--jobs,-j", jobs, "worker threads")->check(CLI::PositiveNumber);

  // hardness
  auto* hard = app.add_subcommand("hardness", "estimate instance hardness");
  fs::path data_path, out_path;
  std::string ensemble_text = "roster";
  ProtocolArgs proto;
  hard->add_option("--data", data_path, "dataset (.arff or .csv)")->required()->check(CLI::ExistingFile);
  hard->add_option("--ensemble", ensemble_text, "\"roster\", algorithm list, or LearnerSpec JSON file");
  hard->add_option("--out", out_path, "CSV output; a .json sidecar is written next to it")->required();
  hard->add_option("--jobs,-j", jobs, "worker threads")->check(CLI::PositiveNumber);
  proto.attach(hard);

  // filter / adaptive-filter
  double phi = 0.5;
  fs::path retained_path;
  auto* filt = app.add_subcommand("filter", "remove instances whose hardness falls below phi");
  filt->add_option("--data", data_path)->required()->check(CLI::ExistingFile);
  filt->add_option("--ensemble", ensemble_text, "\"roster\", algorithm list, or LearnerSpec JSON file");
  std::string filter_target;
  filt->add_option("--phi", phi, "hardness threshold in (0,1]");
  filt->add_option("--target", filter_target, "learner whose CV accuracy is reported before and after filtering");
  filt->add_option("--out", out_path, "JSON report")->required();
  filt->add_option("--retained", retained_path, "write the retained dataset here");
  filt->add_option("--jobs,-j", jobs, "worker threads")->check(CLI::PositiveNumber);
  proto.attach(filt);

  auto* adapt = app.add_subcommand("adaptive-filter", "greedily build a filter ensemble for a target learner");
  std::string target_text = "knn";
  std::string candidates_text = "roster";
  adapt->add_option("--data", data_path)->required()->check(CLI::ExistingFile);
  adapt->add_option("--target", target_text, "algorithm name or LearnerSpec JSON file");
  adapt->add_option("--candidates", candidates_text, "\"roster\", algorithm list, or LearnerSpec JSON file");
  adapt->add_option("--phi", phi, "hardness threshold in (0,1]");
  adapt->add_option("--out", out_path, "JSON report")->required();
  adapt->add_option("--retained", retained_path, "write the retained dataset here");
  adapt->add_option("--jobs,-j", jobs, "worker threads")->check(CLI::PositiveNumber);
  proto.attach(adapt);

  // hpo
  auto* hpo = app.add_subcommand("hpo", "random hyper-parameter search");
  std::string algorithm_text;
  int trials = 10;
  hpo->add_option("--algorithm", algorithm_text)->required();
  hpo->add_option("--data", data_path)->required()->check(CLI::ExistingFile);
  hpo->add_option("--trials", trials)->check(CLI::PositiveNumber);
  hpo->add_option("--out", out_path, "JSON report")->required();
  hpo->add_option("--jobs,-j", jobs, "worker threads")->check(CLI::PositiveNumber);
  proto.attach(hpo);

  // cod
  auto* codc = app.add_subcommand("cod", "classifier output difference matrix, dendrogram and selection");
  std::vector<fs::path> corpus;
  std::string learners_text = "roster";
  std::string linkage_text = "average";
  double cut = 0.18;
  codc->add_option("--data", corpus, "datasets")->required()->check(CLI::ExistingFile);
  codc->add_option("--learners", learners_text, "\"roster\", algorithm list, or LearnerSpec JSON file");
  codc->add_option("--linkage", linkage_text)->check(CLI::IsMember({"single", "complete", "average"}));
  codc->add_option("--cut", cut, "cut height");
  codc->add_option("--out", out_dir, "output directory")->required();
  codc->add_option("--jobs,-j", jobs, "worker threads")->check(CLI::PositiveNumber);
  proto.attach(codc);

  // stats
  auto* st = app.add_subcommand("stats", "reduction metrics and signed-ranks test on paired accuracies");
  fs::path input_path;
  double alpha = 0.05;
  st->add_option("--input", input_path, "CSV with dataset,baseline,treatment rows")->required()->check(CLI::ExistingFile);
  st->add_option("--alpha", alpha);
  st->add_option("--out", out_path, "JSON verdict (stdout when omitted)");
  st->add_option("--jobs,-j", jobs, "accepted for uniformity; the test is serial")->check(CLI::PositiveNumber);

  // gen
  auto* gen = app.add_subcommand("gen", "generate synthetic datasets");
  int n_per_class = 50, n_detrimental = 5;
  double overlap = 0.3;
  std::uint64_t gen_seed = 0;
  bool whole_corpus = false;
  gen->add_option("--out", out_path, "dataset path, or a directory with --corpus")->required();
  gen->add_option("--n-per-class", n_per_class)->check(CLI::PositiveNumber);
  gen->add_option("--overlap", overlap)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--n-detrimental", n_detrimental)->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", gen_seed);
  gen->add_flag("--corpus", whole_corpus, "write the bundled benchmark corpus");
  gen->add_option("--jobs,-j", jobs, "accepted for uniformity; generation is serial")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    set_worker_count(jobs);

    if (*run) {
      const ExperimentConfig config = load_config(config_path);
      const ComparisonReport report = run_experiment(config);
      for (auto format : {ReportFormat::json, ReportFormat::csv, ReportFormat::markdown})
        std::cout << emit_report(report, format, out_dir).string() << "\n";
    } else if (*hard) {
      const Dataset data = load_dataset(data_path);
      const auto specs = parse_specs(ensemble_text);
      const HardnessEstimate h = estimate_hardness(data, make_ensemble(specs), proto.protocol());
      std::string csv = "instance_id,p_correct,label\n";
      for (std::size_t i = 0; i < h.size(); ++i)
        csv += std::to_string(h.ids[i]) + "," + format_double(h.p_correct(i)) + "," + data.classes()[h.labels[i]] + "\n";
      write_text(out_path, csv);
      fs::path sidecar = out_path;
      sidecar.replace_extension(".json");
      write_json(sidecar, h.provenance());
    } else if (*filt) {
      const Dataset data = load_dataset(data_path);
      const auto ensemble = make_ensemble(parse_specs(ensemble_text));
      FilterContext ctx(data, proto.protocol());
      FilterOutcome out = ensemble_filter(data, ctx.hardness(ensemble), ensemble, phi);
      nlohmann::json j;
      if (!filter_target.empty()) {
        const auto target = make_learner(parse_spec(filter_target));
        out.baseline_accuracy = ctx.run_la(*target, {}, phi);
        out.final_accuracy = ctx.run_la(*target, ensemble, phi);
        j = out.to_json();
        j["target"] = target->describe();
      } else {
        j = out.to_json();
      }
      write_json(out_path, j);
      if (!retained_path.empty()) write_dataset(out.retained, retained_path);
    } else if (*adapt) {
      const Dataset data = load_dataset(data_path);
      const auto target = make_learner(parse_spec(target_text));
      const auto candidates = make_ensemble(parse_specs(candidates_text));
      FilterContext ctx(data, proto.protocol());
      const FilterOutcome out = adaptive_filter(ctx, *target, candidates, phi);
      nlohmann::json j = out.to_json();
      j["target"] = target->describe();
      write_json(out_path, j);
      if (!retained_path.empty()) write_dataset(out.retained, retained_path);
    } else if (*hpo) {
      const Dataset data = load_dataset(data_path);
      write_json(out_path, random_search(parse_algorithm(algorithm_text), data, trials, proto.protocol()).to_json());
    } else if (*codc) {
      std::vector<Dataset> datasets;
      for (const auto& p : corpus) datasets.push_back(load_dataset(p));
      const CodMatrix m = cod_matrix(make_ensemble(parse_specs(learners_text)), datasets, proto.protocol());
      const Dendrogram dg = agglomerate(m, parse_linkage(linkage_text));
      const Ensemble chosen = cut_and_select(dg, m, cut);
      std::vector<std::string> names;
      for (const auto& l : m.learners) names.push_back(l->describe().at("algorithm").get<std::string>());
      std::string csv = "learner";
      for (const auto& n : names) csv += "," + n;
      csv += "\n";
      for (std::size_t i = 0; i < m.size(); ++i) {
        csv += names[i];
        for (double v : m.d[i]) csv += "," + format_double(v);
        csv += "\n";
      }
      fs::create_directories(out_dir);
      write_text(out_dir / "cod_matrix.csv", csv);
      nlohmann::json dj = dg.to_json();
      dj["learners"] = names;
      dj["linkage"] = linkage_text;
      write_json(out_dir / "dendrogram.json", dj);
      write_json(out_dir / "ensemble.json", describe(chosen));
    } else if (*st) {
      std::ifstream in(input_path);
      PairedResults pairs;
      std::string line;
      int line_no = 0;
      while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string name, bl, g;
        if (!std::getline(row, name, ',') || !std::getline(row, bl, ',') || !std::getline(row, g, ','))
          throw Error(ErrorCode::ragged_rows, "line " + std::to_string(line_no) + " needs dataset,baseline,treatment");
        try {
          pairs.add(name, std::stod(bl), std::stod(g));
        } catch (const std::invalid_argument&) {
          if (line_no == 1) continue;  // header
          throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + " has a non-numeric accuracy");
        }
      }
      const auto metrics = reduction_metrics(pairs);
      std::optional<WilcoxonVerdict> verdict;
      nlohmann::json j = {{"pairs", pairs.size()}, {"metrics", metrics.to_json()}};
      if (pairs.size() >= 5) {
        verdict = wilcoxon(pairs, alpha);
        j["wilcoxon"] = verdict->to_json();
      } else {
        j["wilcoxon"] = nullptr;
        j["note"] = "the signed-ranks test needs at least 5 pairs";
      }
      if (out_path.empty())
        std::cout << j.dump(2) << "\n";
      else
        write_json(out_path, j);
      std::cout << format_column(pairs, metrics, verdict);
    } else if (*gen) {
      if (whole_corpus) {
        fs::create_directories(out_path);
        for (const auto& entry : benchmark_corpus()) {
          write_arff(entry.dataset.data, out_path / (entry.name + ".arff"), entry.name);
          write_json(out_path / (entry.name + ".detrimental.json"), entry.dataset.detrimental_ids);
        }
      } else {
        const auto g = generate_two_cluster(n_per_class, overlap, n_detrimental, gen_seed);
        write_dataset(g.data, out_path);
        fs::path sidecar = out_path;
        sidecar.replace_extension(".detrimental.json");
        write_json(sidecar, g.detrimental_ids);
      }
    }
  } catch (const Error& e) {
    std::cerr << "trainclean: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "trainclean: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
