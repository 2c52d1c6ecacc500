#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pctc/harness.hpp"

namespace py = pybind11;
using namespace pctc;

namespace {

Graph to_graph(std::size_t n, const std::vector<std::tuple<NodeId, NodeId, double>>& edges) {
  Graph g(n);
  for (const auto& [u, v, w] : edges) g.add_edge({u, v, w, 1.0, w});
  return g;
}

std::vector<std::tuple<NodeId, NodeId, double>> from_graph(const Graph& g) {
  std::vector<std::tuple<NodeId, NodeId, double>> out;
  for (const auto& e : g.edges()) out.emplace_back(e.u, e.v, e.w);
  return out;
}

SymmetryRule parse_rule(const std::string& rule) {
  if (rule == "mutual") return SymmetryRule::mutual;
  if (rule == "either") return SymmetryRule::either;
  if (rule == "strict") return SymmetryRule::strict;
  throw ConfigError("unknown symmetry rule: " + rule);
}

RouteMetric parse_metric(const std::string& metric) {
  if (metric == "SP") return RouteMetric::SP;
  if (metric == "RPTa") return RouteMetric::RPTa;
  throw ConfigError("unknown route metric: " + metric);
}

py::dict aggregates_dict(const MetricsReport& report) {
  py::dict out;
  for (const auto& row : report.aggregates) {
    const py::str group(row.group);
    if (!out.contains(group)) out[group] = py::dict();
    py::dict entry;
    entry["n"] = row.value.n;
    entry["mean"] = row.value.mean;
    entry["ci95_half_width"] = row.value.half_width ? py::cast(*row.value.half_width) : py::none();
    out[group].cast<py::dict>()[py::str(row.metric)] = entry;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Prediction-based cognitive topology control for CR-MANETs";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  static py::exception<ConfigError> config_error(m, "ConfigError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      py::set_error(config_error, e.what());
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.attr("__version__") = std::string(kVersion);
  m.def("version", [] { return std::string(kVersion); });

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("area_width", &ScenarioConfig::area_width)
      .def_readwrite("area_height", &ScenarioConfig::area_height)
      .def_readwrite("n_nodes", &ScenarioConfig::n_nodes)
      .def_readwrite("v_max", &ScenarioConfig::v_max)
      .def_readwrite("lambda_", &ScenarioConfig::lambda)
      .def_readwrite("tx_range", &ScenarioConfig::tx_range)
      .def_readwrite("rate", &ScenarioConfig::rate)
      .def_readwrite("delta", &ScenarioConfig::delta)
      .def_readwrite("tau", &ScenarioConfig::tau)
      .def_readwrite("zeta", &ScenarioConfig::zeta)
      .def_readwrite("sim_duration", &ScenarioConfig::sim_duration)
      .def_readwrite("rng_seed", &ScenarioConfig::rng_seed)
      .def("set", [](ScenarioConfig& c, const std::string& key, const std::string& value) { apply_setting(c, key, value); })
      .def("violations",
           [](const ScenarioConfig& c) {
             std::vector<std::pair<std::string, std::string>> out;
             for (const auto& v : validate(c)) out.emplace_back(v.field, v.message);
             return out;
           })
      .def("to_text", &to_key_value)
      .def_static("parse", [](const std::string& text) {
        std::istringstream in(text);
        return parse_config(in);
      });

  m.def(
      "fit_quadratic",
      [](const std::array<std::pair<double, double>, 3>& samples) {
        std::array<DistanceSample, 3> s;
        for (int i = 0; i < 3; ++i) s[i] = {samples[i].first, samples[i].second};
        const QuadFit f = fit_quadratic(s);
        return std::make_tuple(f.alpha, f.beta, f.gamma, f.t2_offset);
      },
      py::arg("samples"), "Quadratic (alpha, beta, gamma, t2_offset) through three (t, d) samples.");

  m.def(
      "solve_crossing",
      [](const std::array<std::pair<double, double>, 3>& samples, double radius, const std::string& mode) {
        std::array<DistanceSample, 3> s;
        for (int i = 0; i < 3; ++i) s[i] = {samples[i].first, samples[i].second};
        if (mode != "exit" && mode != "entry") throw ConfigError("mode must be 'exit' or 'entry'");
        return solve_crossing(fit_quadratic(s), radius, mode == "exit" ? CrossingMode::exit : CrossingMode::entry);
      },
      py::arg("samples"), py::arg("radius"), py::arg("mode") = "exit",
      "Seconds after the last sample until the fitted distance crosses radius.");

  m.def(
      "availability_probability",
      [](double horizon, double lambda, double tau, double zeta) {
        PredictionParams p;
        p.lambda = lambda;
        p.tau = tau;
        p.zeta = zeta;
        return availability_probability(horizon, p);
      },
      py::arg("horizon"), py::arg("lambda_") = 1.0 / 60.0, py::arg("tau") = 0.0, py::arg("zeta") = 0.5);

  m.def("edge_weight", &edge_weight, py::arg("t_a"), py::arg("rate"), py::arg("delta"), py::arg("cap"));
  m.def("control_intensity_formula", &control_intensity_formula, py::arg("n"));

  m.def(
      "build_topology",
      [](std::size_t n, const std::vector<std::tuple<NodeId, NodeId, double>>& edges, const std::string& rule) {
        return from_graph(build_topology(to_graph(n, edges), parse_rule(rule)));
      },
      py::arg("n"), py::arg("edges"), py::arg("rule") = "mutual", "Kept (u, v, w) edges of the controlled topology.");

  m.def(
      "find_route",
      [](std::size_t n, const std::vector<std::tuple<NodeId, NodeId, double>>& edges, NodeId src, NodeId dst,
         const std::string& metric) -> py::object {
        const auto path = find_route(to_graph(n, edges), src, dst, parse_metric(metric));
        if (!path) return py::none();
        return py::cast(std::make_tuple(path->nodes, path->weight, path->hops));
      },
      py::arg("n"), py::arg("edges"), py::arg("src"), py::arg("dst"), py::arg("metric") = "RPTa");

  m.def(
      "run_preset",
      [](const std::string& name, std::optional<std::size_t> trials, std::optional<std::uint64_t> seed,
         const std::map<std::string, std::string>& settings, std::optional<std::string> out) {
        ExperimentPreset preset = ExperimentPreset::defaults(parse_preset(name));
        if (trials) preset.trials = *trials;
        for (const auto& [k, v] : settings) preset.overrides.emplace_back(k, v);
        if (seed) preset.overrides.emplace_back("rng_seed", std::to_string(*seed));
        MetricsReport report;
        {
          py::gil_scoped_release release;
          report = run_preset(preset, ScenarioConfig{});
          if (out) write_report(report, *out);
        }
        return aggregates_dict(report);
      },
      py::arg("name"), py::arg("trials") = py::none(), py::arg("seed") = py::none(),
      py::arg("settings") = std::map<std::string, std::string>{}, py::arg("out") = py::none(),
      "Runs a preset and returns {group: {metric: {n, mean, ci95_half_width}}}.");

  m.def(
      "check_properties",
      [](std::size_t graphs, std::size_t max_nodes, std::uint64_t seed) {
        ScenarioConfig config;
        config.rng_seed = seed;
        std::vector<PropertyRow> rows;
        {
          py::gil_scoped_release release;
          rows = properties_suite(config, graphs, max_nodes);
        }
        py::dict out;
        std::size_t conn = 0, sym = 0, span = 0;
        for (const auto& r : rows) {
          conn += r.connectivity;
          sym += r.symmetry;
          span += r.spanner;
        }
        out["graphs"] = rows.size();
        out["connectivity"] = conn;
        out["symmetry"] = sym;
        out["spanner"] = span;
        return out;
      },
      py::arg("graphs") = 200, py::arg("max_nodes") = 30, py::arg("seed") = 1);
}
