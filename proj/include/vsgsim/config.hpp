#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "vsgsim/controller.hpp"
#include "vsgsim/fnnc.hpp"
#include "vsgsim/fuzzy.hpp"
#include "vsgsim/scenario.hpp"

namespace vsgsim {

/// Fully resolved run description: everything needed to reproduce a trace.
struct RunConfig {
    std::string scenario_id = "I";
    std::optional<ScenarioSpec> custom_scenario;  // overrides scenario_id
    ControllerKind controller = ControllerKind::fixed;
    std::uint64_t seed = 42;
    std::optional<double> dt;  // overrides the scenario default
    std::string out_dir = ".";
    FnnOptions fnn;
    FuzzyConfig fuzzy = FuzzyConfig::defaults();
    std::string endpoint;  // host:port for the remote controller
    int timeout_ms = 50;
    std::optional<std::string> fnn_load_path;  // start from a saved network
    std::optional<std::string> fnn_save_path;  // persist the trained network

    /// Scenario with seed, dt override and validation applied.
    ScenarioSpec resolve_scenario() const;

    void validate() const;
};

/// JSON round trip; the file schema is documented in the README.
RunConfig run_config_from_json_file(const std::string& path);
RunConfig run_config_from_json(const std::string& text);
std::string run_config_to_json(const RunConfig& cfg);

ScenarioSpec scenario_from_json(const std::string& text);
std::string scenario_to_json(const ScenarioSpec& spec);

FuzzyConfig fuzzy_config_from_json(const std::string& text);
std::string fuzzy_config_to_json(const FuzzyConfig& cfg);

/// `<scenario>_<controller>_<seed>` with path separators sanitized.
std::string run_basename(const RunConfig& cfg);

/// Instantiates `kind` with the configuration's controller-specific settings
/// (rule tables, network options and learning rates, remote endpoint).
std::unique_ptr<Controller> make_controller(const RunConfig& cfg, ControllerKind kind,
                                            double dt);

}  // namespace vsgsim
