// Python bindings for the main operations: scenario discovery, simulation
// runs, method comparisons and trace metrics. Heavy loops release the GIL.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "vsgsim/config.hpp"
#include "vsgsim/fuzzy.hpp"
#include "vsgsim/metrics.hpp"
#include "vsgsim/runner.hpp"
#include "vsgsim/trace.hpp"

namespace py = pybind11;
using namespace vsgsim;

namespace {

SimTrace run_from_json(const std::string& config_json) {
    const RunConfig cfg = run_config_from_json(config_json);
    cfg.validate();
    const ScenarioSpec spec = cfg.resolve_scenario();
    auto controller = make_controller(cfg, cfg.controller, spec.dt);
    return run_scenario(spec, *controller);
}

py::dict trace_to_dict(const SimTrace& trace) {
    const std::pair<const char*, double TraceRow::*> columns[] = {
        {"t", &TraceRow::t},           {"delta_f", &TraceRow::freq_dev},
        {"rocof", &TraceRow::rocof},   {"dp_m", &TraceRow::turbine},
        {"dp_g", &TraceRow::governor}, {"dp_c", &TraceRow::secondary},
        {"dp_w", &TraceRow::wind},     {"dp_pv", &TraceRow::solar},
        {"dp_vi", &TraceRow::ess},     {"dp_l", &TraceRow::load},
        {"kv", &TraceRow::kv},         {"dv", &TraceRow::dv},
        {"rv", &TraceRow::rv},
    };
    py::dict cols;
    for (const auto& [name, member] : columns) {
        std::vector<double> values;
        values.reserve(trace.rows.size());
        for (const TraceRow& row : trace.rows) values.push_back(row.*member);
        cols[name] = std::move(values);
    }
    py::dict out;
    out["dt"] = trace.dt;
    out["frames_lost"] = trace.frames_lost;
    out["columns"] = cols;
    return out;
}

py::dict metrics_to_dict(const DisturbanceMetrics& m) {
    py::dict d;
    d["overshoot_mhz"] = m.overshoot_mhz;
    d["settling_s"] = m.settling_s;
    d["peak_rocof"] = m.peak_rocof;
    d["settled"] = m.settled;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Microgrid frequency-regulation simulator with adaptive "
              "virtual-synchronous-generator controllers";
    m.attr("__version__") = "1.0.0";

    m.def("builtin_scenario_ids", &builtin_scenario_ids,
          "Identifiers of the built-in disturbance scenarios.");

    m.def(
        "scenario_json",
        [](const std::string& id) { return scenario_to_json(builtin_scenario(id)); },
        py::arg("id"), "A built-in scenario as a JSON document.");

    m.def(
        "default_config_json", [] { return run_config_to_json(RunConfig{}); },
        "The default run configuration as a JSON document.");

    m.def(
        "run",
        [](const std::string& config_json) {
            SimTrace trace;
            {
                py::gil_scoped_release release;
                trace = run_from_json(config_json);
            }
            return trace_to_dict(trace);
        },
        py::arg("config_json"),
        "Simulate one run described by a configuration JSON document; returns "
        "{'dt', 'frames_lost', 'columns': {name: [values]}}.");

    m.def(
        "run_csv",
        [](const std::string& config_json) {
            py::gil_scoped_release release;
            const SimTrace trace = run_from_json(config_json);
            std::ostringstream os;
            write_trace_csv(os, trace);
            return os.str();
        },
        py::arg("config_json"),
        "Simulate one run and return the trace in CSV form (byte-identical to "
        "the command-line tool's output).");

    m.def(
        "compare",
        [](const std::string& config_json, const std::vector<std::string>& methods,
           double t_event, double band, double t_end) {
            std::vector<MethodMetrics> report;
            {
                py::gil_scoped_release release;
                const RunConfig base = run_config_from_json(config_json);
                const ScenarioSpec spec = base.resolve_scenario();
                std::vector<std::pair<std::string, SimTrace>> runs;
                for (const std::string& name : methods) {
                    RunConfig cfg = base;
                    cfg.controller = controller_kind_from_string(name);
                    auto controller = make_controller(cfg, cfg.controller, spec.dt);
                    runs.emplace_back(name, run_scenario(spec, *controller));
                }
                std::vector<std::pair<std::string, const SimTrace*>> labeled;
                labeled.reserve(runs.size());
                for (const auto& [name, trace] : runs) labeled.emplace_back(name, &trace);
                report = comparison_report(labeled, t_event, band, t_end);
            }
            py::list out;
            for (const MethodMetrics& row : report) {
                py::dict d = metrics_to_dict(row.metrics);
                d["method"] = row.method;
                out.append(d);
            }
            return out;
        },
        py::arg("config_json"), py::arg("methods"), py::arg("t_event"),
        py::arg("band") = 0.005,
        py::arg("t_end") = std::numeric_limits<double>::infinity(),
        "Run several controllers on the same disturbance stream and rank them "
        "by overshoot over [t_event, t_end).");

    m.def(
        "disturbance_metrics",
        [](const std::string& trace_csv, double t_event, double band, double t_end) {
            std::istringstream is(trace_csv);
            const SimTrace trace = read_trace_csv(is);
            return metrics_to_dict(disturbance_metrics(trace, t_event, band, t_end));
        },
        py::arg("trace_csv"), py::arg("t_event"), py::arg("band") = 0.005,
        py::arg("t_end") = std::numeric_limits<double>::infinity(),
        "Overshoot, settling time and peak RoCoF of a trace CSV over "
        "[t_event, t_end).");

    m.def(
        "fuzzy_adapt",
        [](double freq_dev, double res_power) {
            const VirtualParams vp = fuzzy_adapt(freq_dev, res_power, FuzzyConfig::defaults());
            return py::make_tuple(vp.inertia, vp.damping, vp.droop);
        },
        py::arg("freq_dev"), py::arg("res_power"),
        "One rule-table inference with the default tables; returns "
        "(inertia, damping, droop).");
}
