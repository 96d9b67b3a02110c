#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gln/data.hpp"
#include "gln/deq.hpp"
#include "gln/harness.hpp"
#include "gln/network.hpp"
#include "gln/stats.hpp"

namespace py = pybind11;
using namespace gln;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Global-Local Neuron networks, trainers and experiment harness";

  py::register_exception<StructuralError>(m, "StructuralError", PyExc_ValueError);
  py::register_exception<EvalError>(m, "EvalError", PyExc_ArithmeticError);
  py::register_exception<DataError>(m, "DataError", PyExc_IOError);

  m.def("ees", [](double x) { return data::ees(x); }, py::arg("x"));
  m.def("se", [](double x) { return data::se(x); }, py::arg("x"));

  py::class_<Network>(m, "Network")
      .def_property_readonly("model", [](const Network& n) { return std::string(to_string(n.kind())); })
      .def_property_readonly("input_dim", &Network::input_dim)
      .def_property_readonly("param_count", &Network::param_count)
      .def_property("params",
                    [](const Network& n) {
                      return std::vector<double>(n.params().begin(), n.params().end());
                    },
                    [](Network& n, const std::vector<double>& p) { n.set_params(p); })
      .def("__call__", [](const Network& n, const std::vector<double>& x) { return n(x); })
      .def("alphas",
           [](const Network& n) {
             std::vector<double> out;
             for (const auto& a : n.alpha_values()) out.push_back(a.alpha);
             return out;
           })
      .def("to_json", [](const Network& n) { return to_json(n); })
      .def_static("from_json", [](const std::string& s) { return network_from_json(s); });

  m.def(
      "init_network",
      [](const std::string& model, const std::string& architecture, std::size_t input_dim,
         std::uint64_t seed) {
        const auto shape = parse_architecture(architecture) == Architecture::OneHidden
                               ? NetworkShape::one_hidden(input_dim)
                               : NetworkShape::two_hidden(input_dim);
        return init(shape, parse_model_kind(model), seed);
      },
      py::arg("model") = "gln", py::arg("architecture") = "one_hidden", py::arg("input_dim") = 1,
      py::arg("seed") = 0);

  py::class_<RunRecord>(m, "RunRecord")
      .def_readonly("task", &RunRecord::task)
      .def_readonly("dataset_or_problem", &RunRecord::dataset_or_problem)
      .def_readonly("model", &RunRecord::model)
      .def_readonly("architecture", &RunRecord::architecture)
      .def_readonly("seed", &RunRecord::seed)
      .def_readonly("test_mse", &RunRecord::test_mse)
      .def_readonly("epochs_run", &RunRecord::epochs_run)
      .def_readonly("alphas", &RunRecord::alphas)
      .def_readonly("wall_time", &RunRecord::wall_time)
      .def_readonly("status", &RunRecord::status)
      .def("failed", &RunRecord::failed);

  py::class_<ExperimentSpec>(m, "ExperimentSpec")
      .def_static("parse", [](const std::string& text) { return parse_spec(text); })
      .def_static("load", &load_spec)
      .def_readwrite("repetitions", &ExperimentSpec::repetitions)
      .def_readwrite("base_seed", &ExperimentSpec::base_seed)
      .def_readwrite("target", &ExperimentSpec::target)
      .def_property_readonly("input_dim", &ExperimentSpec::input_dim)
      .def("to_ini", [](const ExperimentSpec& s) { return spec_to_ini(s); });

  m.def("run_experiment", &run_experiment, py::arg("spec"), py::arg("jobs") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("run_records_csv", &run_records_csv);
  m.def("parse_run_records", [](const std::string& t) { return parse_run_records(t); });

  m.def(
      "solve",
      [](const std::string& problem, const std::string& model, const std::string& architecture,
         std::uint64_t seed, std::size_t epochs) {
        ExperimentSpec spec;
        spec.task = TaskKind::Deq;
        spec.target = problem;
        spec.model = parse_model_kind(model);
        spec.architecture = parse_architecture(architecture);
        spec.epochs = epochs;
        auto r = solve(spec, seed);
        return py::make_tuple(r.record, r.outcome.best_net);
      },
      py::arg("problem"), py::arg("model") = "gln", py::arg("architecture") = "one_hidden",
      py::arg("seed") = 1, py::arg("epochs") = 0);

  py::class_<stats::SampleStats>(m, "SampleStats")
      .def_readonly("n", &stats::SampleStats::n)
      .def_readonly("min", &stats::SampleStats::min)
      .def_readonly("max", &stats::SampleStats::max)
      .def_readonly("mean", &stats::SampleStats::mean)
      .def_readonly("median", &stats::SampleStats::median)
      .def_readonly("std", &stats::SampleStats::std)
      .def_readonly("cv", &stats::SampleStats::cv);
  m.def("describe", [](const std::vector<double>& v) { return stats::describe(v); });

  py::class_<stats::KsResult>(m, "KsResult")
      .def_readonly("d_statistic", &stats::KsResult::d_statistic)
      .def_readonly("p_value", &stats::KsResult::p_value)
      .def_readonly("reject_at_5pct", &stats::KsResult::reject_at_5pct);
  m.def("ks_two_sample", [](const std::vector<double>& a, const std::vector<double>& b) {
    return stats::ks_two_sample(a, b);
  });
}
