// Thin binding layer: arguments are plain Python values, results come back as
// JSON text that the package wrapper decodes.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "trainclean/trainclean.hpp"

namespace py = pybind11;
using namespace trainclean;

namespace {

Ensemble ensemble_from(const std::optional<std::vector<std::string>>& names) {
  if (!names) return make_ensemble(default_roster());
  std::vector<LearnerSpec> specs;
  for (const auto& n : *names) specs.push_back(LearnerSpec::with_defaults(parse_algorithm(n)));
  return make_ensemble(specs);
}

PairedResults pairs_from(const std::vector<double>& baseline, const std::vector<double>& treatment) {
  if (baseline.size() != treatment.size())
    throw Error(ErrorCode::invalid_argument, "baseline and treatment differ in length");
  PairedResults p;
  for (std::size_t i = 0; i < baseline.size(); ++i) p.add("d" + std::to_string(i), baseline[i], treatment[i]);
  return p;
}

}  // namespace

PYBIND11_MODULE(_trainclean, m) {
  m.doc() = "Instance-filtering and hyper-parameter optimization core";
  static py::exception<Error> error_type(m, "TraincleanError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error_type, e.what());
    }
  });

  py::class_<Protocol>(m, "Protocol")
      .def(py::init([](int runs, int folds, std::uint64_t seed) { return Protocol{runs, folds, seed}; }),
           py::arg("runs") = 5, py::arg("folds") = 10, py::arg("seed") = 0)
      .def_readwrite("runs", &Protocol::runs)
      .def_readwrite("folds", &Protocol::folds)
      .def_readwrite("seed", &Protocol::seed);

  m.def("set_jobs", &set_worker_count, py::arg("jobs"));

  m.def("roster", [] {
    std::vector<std::string> out;
    for (const auto& s : default_roster()) out.push_back(to_string(s.algorithm));
    return out;
  });

  m.def(
      "dataset_summary",
      [](const std::filesystem::path& path) {
        const Dataset d = load_dataset(path);
        nlohmann::json j{{"instances", d.size()}, {"features", d.num_features()}, {"classes", d.num_classes()}};
        return j.dump();
      },
      py::arg("path"));

  m.def(
      "hardness",
      [](const std::filesystem::path& path, const std::optional<std::vector<std::string>>& ensemble,
         const Protocol& protocol) {
        py::gil_scoped_release release;
        const Dataset d = load_dataset(path);
        const auto h = estimate_hardness(d, ensemble_from(ensemble), protocol);
        nlohmann::json j = nlohmann::json::object();
        for (std::size_t i = 0; i < h.size(); ++i) j[std::to_string(h.ids[i])] = h.p_correct(i);
        return j.dump();
      },
      py::arg("path"), py::arg("ensemble") = py::none(), py::arg("protocol") = Protocol{});

  m.def(
      "ensemble_filter",
      [](const std::filesystem::path& path, double phi, const std::optional<std::vector<std::string>>& ensemble,
         const Protocol& protocol) {
        py::gil_scoped_release release;
        return ensemble_filter(load_dataset(path), ensemble_from(ensemble), phi, protocol).to_json().dump();
      },
      py::arg("path"), py::arg("phi") = 0.5, py::arg("ensemble") = py::none(), py::arg("protocol") = Protocol{});

  m.def(
      "adaptive_filter",
      [](const std::filesystem::path& path, const std::string& target, double phi,
         const std::optional<std::vector<std::string>>& candidates, const Protocol& protocol) {
        py::gil_scoped_release release;
        const auto learner = make_learner(LearnerSpec::with_defaults(parse_algorithm(target)));
        return adaptive_filter(load_dataset(path), *learner, ensemble_from(candidates), phi, protocol).to_json().dump();
      },
      py::arg("path"), py::arg("target") = "knn", py::arg("phi") = 0.5, py::arg("candidates") = py::none(),
      py::arg("protocol") = Protocol{});

  m.def(
      "random_search",
      [](const std::string& algorithm, const std::filesystem::path& path, int trials, const Protocol& protocol) {
        py::gil_scoped_release release;
        return random_search(parse_algorithm(algorithm), load_dataset(path), trials, protocol).to_json().dump();
      },
      py::arg("algorithm"), py::arg("path"), py::arg("trials") = 10, py::arg("protocol") = Protocol{});

  m.def(
      "reduction_metrics",
      [](const std::vector<double>& baseline, const std::vector<double>& treatment) {
        return reduction_metrics(pairs_from(baseline, treatment)).to_json().dump();
      },
      py::arg("baseline"), py::arg("treatment"));

  m.def(
      "wilcoxon",
      [](const std::vector<double>& baseline, const std::vector<double>& treatment, double alpha) {
        return wilcoxon(pairs_from(baseline, treatment), alpha).to_json().dump();
      },
      py::arg("baseline"), py::arg("treatment"), py::arg("alpha") = 0.05);

  m.def(
      "generate_two_cluster",
      [](const std::filesystem::path& out, int n_per_class, double overlap, int n_detrimental, std::uint64_t seed) {
        const auto g = generate_two_cluster(n_per_class, overlap, n_detrimental, seed);
        write_arff(g.data, out);
        return std::vector<std::uint64_t>(g.detrimental_ids.begin(), g.detrimental_ids.end());
      },
      py::arg("out"), py::arg("n_per_class") = 50, py::arg("overlap") = 0.3, py::arg("n_detrimental") = 5,
      py::arg("seed") = 0);

  m.def(
      "run_experiment",
      [](const std::filesystem::path& config) {
        py::gil_scoped_release release;
        return report_to_json(run_experiment(load_config(config))).dump();
      },
      py::arg("config"));
}
