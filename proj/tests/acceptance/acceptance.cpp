// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "trainclean/trainclean.hpp"

#include "../oracles.hpp"
#include "../support.hpp"

using namespace trainclean;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kMinGainPoints = 0.5;          // criterion 1
constexpr double kRuntimeLimitSeconds = 600.0;  // criterion 1, per target
constexpr double kPlantedRecall = 0.80;         // criterion 4
constexpr double kCleanRemovalCap = 0.10;       // criterion 4
constexpr double kMetricTolerance = 1e-9;       // criterion 5
constexpr double kNormalAgreement = 0.95;       // criterion 6
constexpr double kPhi = 0.5;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

const fs::path kSource = TRAINCLEAN_SOURCE_DIR;
const fs::path kCli = TRAINCLEAN_CLI;

std::vector<fs::path> corpus_paths() {
  std::vector<fs::path> out;
  for (const char* name : {"two_cluster", "bimodal_2d", "three_class", "mixed_types", "multimodal"})
    out.push_back(kSource / "data" / "corpus" / (std::string(name) + ".arff"));
  return out;
}

// Criteria 1 and 2 share one experiment per target.
struct DeskResult {
  AlgorithmId target;
  ComparisonReport report;
  double seconds = 0;
};

const std::vector<DeskResult>& desk_results() {
  static const std::vector<DeskResult> results = [] {
    std::vector<DeskResult> out;
    for (AlgorithmId target : {AlgorithmId::knn, AlgorithmId::decision_tree, AlgorithmId::naive_bayes}) {
      ExperimentConfig c;
      c.corpus = corpus_paths();
      c.targets = {target};
      c.conditions = {Condition::orig, Condition::l_filter, Condition::hpo, Condition::adaptive_orig};
      c.seed = 1;
      const auto start = std::chrono::steady_clock::now();
      DeskResult r{target, run_experiment(c), 0};
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      out.push_back(std::move(r));
    }
    return out;
  }();
  return results;
}

Outcome directional_replication() {
  Outcome o{true, ""};
  for (const auto& r : desk_results()) {
    const double orig = *r.report.mean_accuracy(Condition::orig, r.target);
    const double lf = *r.report.mean_accuracy(Condition::l_filter, r.target);
    const double hpo = *r.report.mean_accuracy(Condition::hpo, r.target);
    const bool ok = lf - orig >= kMinGainPoints && hpo - orig >= kMinGainPoints && r.seconds <= kRuntimeLimitSeconds &&
                    r.report.datasets.size() >= 5;
    o.pass = o.pass && ok;
    o.detail += to_string(r.target) + fmt(" orig=%.2f lf=%.2f hpo=%.2f (%.0fs); ", orig, lf, hpo, r.seconds);
  }
  return o;
}

Outcome adaptive_dominance() {
  Outcome o{true, ""};
  int exceptions = 0;
  for (const auto& r : desk_results()) {
    const double orig = *r.report.mean_accuracy(Condition::orig, r.target);
    const double lf = *r.report.mean_accuracy(Condition::l_filter, r.target);
    const double ad = *r.report.mean_accuracy(Condition::adaptive_orig, r.target);
    for (const auto& name : r.report.datasets)
      if (*r.report.find(Condition::adaptive_orig, r.target, name)->accuracy <
          *r.report.find(Condition::orig, r.target, name)->accuracy)
        ++exceptions;
    // The corpus carries planted label noise, so the first inequality must be strict.
    const bool ok = ad > lf && lf >= orig;
    o.pass = o.pass && ok;
    o.detail += to_string(r.target) + fmt(" adaptive=%.2f lf=%.2f orig=%.2f; ", ad, lf, orig);
  }
  o.pass = o.pass && exceptions == 0;
  o.detail += "per-dataset exceptions=" + std::to_string(exceptions);
  return o;
}

Outcome exhaustive_oracle() {
  int violations = 0;
  const AlgorithmId targets[] = {AlgorithmId::knn, AlgorithmId::decision_tree, AlgorithmId::naive_bayes};
  const Ensemble roster = make_ensemble(default_roster());
  for (int i = 0; i < 20; ++i) {
    MixtureOptions opts;
    opts.n_instances = 8 + i % 5;  // 8..12
    opts.n_numeric = 2;
    opts.spread = 1.5;
    opts.label_noise = 0.15;
    const Dataset d = generate_mixture(opts, 500 + i).data;
    FilterContext ctx(d, Protocol{3, 4, static_cast<std::uint64_t>(i)});
    const auto target = make_learner(LearnerSpec::with_defaults(targets[i % 3]));
    const double orig = ctx.run_la(*target, {}, 1.0);
    const double adaptive = *adaptive_filter(ctx, *target, roster, kPhi).final_accuracy;
    const double best = exhaustive_best_subset(ctx, *target).accuracy;
    if (!(best >= adaptive && adaptive >= orig)) ++violations;
  }
  return {violations == 0, "20 datasets, violations=" + std::to_string(violations)};
}

Outcome planted_noise_recovery() {
  double planted_share = 0, clean_share = 0;
  const Ensemble roster = make_ensemble(default_roster());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = generate_two_cluster(50, 0.3, 5, seed);  // 10 planted of 100
    const auto out = ensemble_filter(g.data, roster, kPhi, Protocol{5, 10, seed});
    int planted = 0;
    for (auto id : out.removed_ids) planted += std::binary_search(g.detrimental_ids.begin(), g.detrimental_ids.end(), id);
    const int clean = static_cast<int>(out.removed_ids.size()) - planted;
    planted_share += planted / 10.0;
    clean_share += clean / 90.0;
  }
  planted_share /= 10;
  clean_share /= 10;
  return {planted_share >= kPlantedRecall && clean_share <= kCleanRemovalCap,
          fmt("planted removed %.3f, clean removed %.3f", planted_share, clean_share)};
}

Outcome metric_formulas() {
  Rng rng(2024);
  PairedResults all;
  double worst = 0;
  bool branches = true;
  double err_sum = 0, acc_sum = 0;
  int err_n = 0, acc_n = 0;
  for (int i = 0; i < 20; ++i) {
    const double bl = std::round(rng.uniform(40, 99) * 100) / 100;
    double g = std::round(rng.uniform(30, 100) * 100) / 100;
    if (i % 7 == 0) g = bl;  // include exact ties
    all.add("d" + std::to_string(i), bl, g);
    PairedResults one;
    one.add("d", bl, g);
    const auto m = reduction_metrics(one);
    const double expected = tc_test::reduction_of(bl, g);
    const bool error_branch = g >= bl;
    branches = branches && (error_branch ? (m.red_err && !m.red_acc) : (m.red_acc && !m.red_err));
    worst = std::max(worst, std::abs((error_branch ? *m.red_err : *m.red_acc) - expected));
    (error_branch ? err_sum : acc_sum) += expected;
    (error_branch ? err_n : acc_n)++;
  }
  const auto m = reduction_metrics(all);
  worst = std::max(worst, std::abs(*m.red_err - err_sum / err_n));
  worst = std::max(worst, std::abs(*m.red_acc - acc_sum / acc_n));
  branches = branches && m.greater + m.equal == err_n && m.less == acc_n;

  // bl = 100 guard and NA sentinels.
  PairedResults guard;
  guard.add("perfect", 100, 100);
  guard.add("other", 50, 60);
  const auto gm = reduction_metrics(guard);
  const bool guard_ok = gm.perfect_baseline == std::vector<std::string>{"perfect"} && std::abs(*gm.red_err - 10.0) < 1e-12 &&
                        !gm.red_acc;
  PairedResults worse;
  worse.add("a", 80, 70);
  const bool na_ok = !reduction_metrics(worse).red_err && reduction_metrics(worse).red_acc;
  return {worst <= kMetricTolerance && branches && guard_ok && na_ok,
          fmt("max abs error %.3g", worst) + (branches ? "" : ", branch mismatch") + (guard_ok ? "" : ", guard failed") +
              (na_ok ? "" : ", NA sentinel failed")};
}

Outcome wilcoxon_correctness() {
  Rng rng(77);
  int exact_mismatch = 0;
  for (int i = 0; i < 100; ++i) {
    const int n = 5 + static_cast<int>(rng.below(6));  // 5..10
    std::vector<double> bl, g;
    for (int k = 0; k < n; ++k) {
      bl.push_back(rng.uniform(50, 90));
      g.push_back(bl.back() + static_cast<int>(rng.below(11)) - 4);
    }
    PairedResults p;
    for (int k = 0; k < n; ++k) p.add("d", bl[k], g[k]);
    const auto v = wilcoxon_with(p, WilcoxonMethod::exact);
    const auto o = tc_test::signed_rank_brute_force(bl, g);
    if (o.n == 0) continue;
    if (v.n_effective != o.n || std::abs(v.w_plus - o.w_plus) > 1e-9 || std::abs(v.p_value - o.p_value) > 1e-12 ||
        v.significant != (o.p_value <= 0.05))
      ++exact_mismatch;
  }

  int sampled = 0, agree = 0;
  for (int attempts = 0; sampled < 100 && attempts < 200000; ++attempts) {
    const int n = 26 + static_cast<int>(rng.below(15));  // 26..40
    const double shift = rng.uniform(0.0, 1.5);
    PairedResults p;
    for (int k = 0; k < n; ++k) {
      const double bl = rng.uniform(50, 90);
      p.add("d", bl, bl + rng.uniform(-4, 4) + shift);
    }
    const auto exact = wilcoxon_with(p, WilcoxonMethod::exact);
    // Near the decision boundary but not at it.
    if (exact.p_value < 0.01 || exact.p_value > 0.15 || std::abs(exact.p_value - 0.05) < 0.005) continue;
    ++sampled;
    agree += wilcoxon_with(p, WilcoxonMethod::normal).significant == exact.significant;
  }
  const double rate = sampled ? static_cast<double>(agree) / sampled : 0.0;
  return {exact_mismatch == 0 && sampled == 100 && rate >= kNormalAgreement,
          "exact vs brute force mismatches=" + std::to_string(exact_mismatch) +
              fmt(", normal agreement %.2f over ", rate) + std::to_string(sampled) + " inputs"};
}

Outcome cod_pipeline() {
  Ensemble abc;
  for (const char* name : {"a", "b", "c"}) abc.push_back(std::make_shared<tc_test::ConstantStub>(false, name));
  const auto m = make_cod_matrix(abc, {{0, 0.1, 0.5}, {0.1, 0, 0.5}, {0.5, 0.5, 0}});
  const auto dg = agglomerate(m);
  const bool merges = dg.merges.size() == 2 && dg.merges[0].left == 0 && dg.merges[0].right == 1 &&
                      dg.merges[0].height == 0.1 && dg.merges[1].left == 3 && dg.merges[1].right == 2 &&
                      dg.merges[1].height == 0.5;
  const auto clusters = cut_clusters(dg, 0.18);
  const auto chosen = cut_and_select(dg, m, 0.18);
  const bool cut_ok = clusters.size() == 2 && chosen.size() == 2 && chosen[1] == abc[2];

  const std::vector<Dataset> corpus{load_dataset(corpus_paths()[0]), load_dataset(corpus_paths()[1])};
  const auto full = cod_matrix(make_ensemble(default_roster()), corpus, Protocol{5, 10, 3});
  bool metric = true;
  for (std::size_t i = 0; i < full.size(); ++i) {
    metric = metric && full.d[i][i] == 0.0;
    for (std::size_t j = 0; j < full.size(); ++j) {
      metric = metric && full.d[i][j] == full.d[j][i] && full.d[i][j] >= 0.0;
      for (std::size_t k = 0; k < full.size(); ++k) metric = metric && full.d[i][k] <= full.d[i][j] + full.d[j][k] + 1e-12;
    }
  }
  return {merges && cut_ok && metric, std::string("hand example ") + (merges && cut_ok ? "ok" : "MISMATCH") +
                                          ", roster matrix pseudometric " + (metric ? "ok" : "VIOLATED")};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli_determinism() {
  const fs::path root = fs::temp_directory_path() / "trainclean_acceptance_cli";
  fs::remove_all(root);
  const fs::path data = kSource / "data" / "corpus" / "two_cluster.arff";
  const fs::path data2 = kSource / "data" / "corpus" / "bimodal_2d.arff";
  fs::create_directories(root);
  {
    std::ofstream cfg(root / "config.toml");
    cfg << "corpus = [\"" << data.generic_string() << "\", \"" << data2.generic_string() << "\"]\n"
        << "targets = [\"knn\", \"naive_bayes\"]\n"
        << "conditions = [\"orig\", \"l_filter\", \"hpo\", \"l_filter_hpo\", \"adaptive_orig\", \"adaptive_hpo\"]\n"
        << "hpo_trials = 3\n[protocol]\nruns = 2\nfolds = 5\nseed = 5\n";
    std::ofstream pairs(root / "pairs.csv");
    pairs << "dataset,baseline,treatment\na,80,82\nb,70,71\nc,60,65\nd,90,89\ne,50,58\nf,75,79\n";
  }
  const std::string d = " --data " + data.string();
  // Each command writes into the directory given by {out}.
  const std::vector<std::pair<std::string, std::string>> commands{
      {"run", "run --config " + (root / "config.toml").string() + " --out {out}"},
      {"hardness", "hardness" + d + " --runs 2 --folds 5 --seed 3 --out {out}/h.csv"},
      {"filter", "filter" + d + " --runs 2 --folds 5 --seed 3 --phi 0.5 --target knn --out {out}/f.json --retained {out}/r.arff"},
      {"adaptive-filter", "adaptive-filter" + d + " --runs 2 --folds 5 --seed 3 --target decision_tree --out {out}/a.json"},
      {"hpo", "hpo --algorithm random_forest" + d + " --trials 3 --runs 2 --folds 5 --seed 3 --out {out}/hpo.json"},
      {"cod", "cod" + d + " --data " + data2.string() + " --runs 2 --folds 5 --seed 3 --out {out}"},
      {"stats", "stats --input " + (root / "pairs.csv").string() + " --out {out}/stats.json"},
      {"gen", "gen --n-per-class 30 --n-detrimental 3 --seed 8 --out {out}/gen.arff"},
  };
  std::vector<std::string> differing;
  for (const auto& [name, command] : commands) {
    std::vector<std::map<std::string, std::string>> outputs;
    for (int jobs : {1, 3, 1}) {
      const fs::path out = root / (name + "_" + std::to_string(outputs.size()));
      fs::create_directories(out);
      std::string cmd = command;
      for (auto pos = cmd.find("{out}"); pos != std::string::npos; pos = cmd.find("{out}"))
        cmd.replace(pos, 5, out.string());
      const std::string full = kCli.string() + " " + cmd + " --jobs " + std::to_string(jobs) + " > " +
                               (out / "stdout.txt").string() + " 2>&1";
      if (std::system(full.c_str()) != 0) {
        differing.push_back(name + "(failed)");
        break;
      }
      std::map<std::string, std::string> files;
      for (const auto& entry : fs::directory_iterator(out))
        if (entry.path().filename() != "stdout.txt") files[entry.path().filename().string()] = slurp(entry.path());
      outputs.push_back(std::move(files));
    }
    if (outputs.size() == 3 && !(outputs[0] == outputs[1] && outputs[1] == outputs[2] && !outputs[0].empty()))
      differing.push_back(name);
  }
  std::string detail = std::to_string(commands.size()) + " subcommands at jobs 1/3/1";
  for (const auto& n : differing) detail += ", differs: " + n;
  return {differing.empty(), detail};
}

Outcome stub_hardness() {
  const Dataset d = tc_test::skewed_dataset(100, 90);
  const auto h = estimate_hardness(d, Ensemble{tc_test::stub()});
  int wrong = 0;
  for (std::size_t i = 0; i < d.size(); ++i) wrong += h.p_correct(i) != (d[i].label == 0 ? 1.0 : 0.0);
  return {wrong == 0, "instances off the exact value: " + std::to_string(wrong)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 directional replication", directional_replication},
      {"2 adaptive dominance", adaptive_dominance},
      {"3 exhaustive oracle consistency", exhaustive_oracle},
      {"4 planted-noise recovery", planted_noise_recovery},
      {"5 metric formulas", metric_formulas},
      {"6 signed-ranks correctness", wilcoxon_correctness},
      {"7 COD pipeline", cod_pipeline},
      {"8 CLI determinism", cli_determinism},
      {"9 hardness protocol", stub_hardness},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << name << "] " << o.detail << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << std::endl;
  return failed ? 1 : 0;
}
