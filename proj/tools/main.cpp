// vsgsim: microgrid frequency-regulation simulator with adaptive
// virtual-synchronous-generator controllers.
//
// Subcommands:
//   run             simulate one (scenario, controller) pair, emit trace CSV
//   compare         run several controllers on the same disturbance stream
//   serve           expose a controller over the datagram bridge
//   list-scenarios  print the built-in scenario set
//
// Exit codes: 0 success, 1 numeric failure, 2 usage/config error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vsgsim/config.hpp"
#include "vsgsim/hil.hpp"
#include "vsgsim/metrics.hpp"
#include "vsgsim/runner.hpp"
#include "vsgsim/trace.hpp"

namespace {

using namespace vsgsim;

// Shared flag set; every option remembers whether it was set on the command
// line so it can override a value loaded from --config.
struct CliOptions {
    std::string config_path;
    std::string scenario = "I";
    std::string controller = "fixed";
    std::uint64_t seed = 42;
    double dt = 0.0;
    std::string out_dir = ".";
    std::string endpoint;
    int timeout_ms = 50;
    std::string fuzzy_path;
    std::string fnn_load;
    std::string fnn_save;
    double eta_w = 0.2, eta_m = 0.02, eta_sigma = 0.01;
    double error_gain = 1.0, sigma_min = 0.05, tolerance = 1e-3, delta_max = 1.0;
    std::uint64_t init_seed = 0;
};

void add_common_options(CLI::App* cmd, CliOptions& o, bool with_controller) {
    cmd->add_option("--config", o.config_path,
                    "run-configuration JSON; flags given here override it");
    cmd->add_option("-s,--scenario", o.scenario, "built-in scenario id");
    if (with_controller)
        cmd->add_option("-c,--controller", o.controller,
                        "none|fixed|fuzzy|fuzzy-inertia|fnnc|remote");
    cmd->add_option("--seed", o.seed, "run seed; derives all stochastic draws");
    cmd->add_option("--dt", o.dt, "override the scenario time step [s]");
    cmd->add_option("-o,--out-dir", o.out_dir, "output directory");
    cmd->add_option("--endpoint", o.endpoint, "host:port of a remote controller");
    cmd->add_option("--timeout-ms", o.timeout_ms, "remote reply timeout");
    cmd->add_option("--fuzzy-config", o.fuzzy_path, "fuzzy-table override JSON");
    cmd->add_option("--fnn-load", o.fnn_load, "start from a saved network state");
    cmd->add_option("--fnn-save", o.fnn_save, "persist the trained network state");
    cmd->add_option("--eta-w", o.eta_w, "weight learning rate");
    cmd->add_option("--eta-m", o.eta_m, "center learning rate");
    cmd->add_option("--eta-sigma", o.eta_sigma, "width learning rate");
    cmd->add_option("--error-gain", o.error_gain, "error-combination constant");
    cmd->add_option("--sigma-min", o.sigma_min, "membership width floor");
    cmd->add_option("--tolerance", o.tolerance, "training dead band on |error|");
    cmd->add_option("--delta-max", o.delta_max, "strengthening-delta cap (0 = off)");
    cmd->add_option("--init-seed", o.init_seed, "network init seed (0 = neutral)");
}

RunConfig build_config(const CLI::App* cmd, const CliOptions& o) {
    RunConfig cfg;
    if (cmd->count("--config")) cfg = run_config_from_json_file(o.config_path);
    auto set = [&](const char* flag) { return cmd->count(flag) > 0; };
    if (set("--scenario")) {
        cfg.scenario_id = o.scenario;
        cfg.custom_scenario.reset();
    }
    if (cmd->get_option_no_throw("--controller") && set("--controller"))
        cfg.controller = controller_kind_from_string(o.controller);
    if (set("--seed")) cfg.seed = o.seed;
    if (set("--dt")) cfg.dt = o.dt;
    if (set("--out-dir")) cfg.out_dir = o.out_dir;
    if (set("--endpoint")) cfg.endpoint = o.endpoint;
    if (set("--timeout-ms")) cfg.timeout_ms = o.timeout_ms;
    if (set("--fuzzy-config")) {
        std::ifstream is(o.fuzzy_path);
        if (!is) throw std::runtime_error("cannot open '" + o.fuzzy_path + "'");
        std::stringstream ss;
        ss << is.rdbuf();
        cfg.fuzzy = fuzzy_config_from_json(ss.str());
    }
    if (set("--fnn-load")) cfg.fnn_load_path = o.fnn_load;
    if (set("--fnn-save")) cfg.fnn_save_path = o.fnn_save;
    if (set("--eta-w")) cfg.fnn.eta_w = o.eta_w;
    if (set("--eta-m")) cfg.fnn.eta_m = o.eta_m;
    if (set("--eta-sigma")) cfg.fnn.eta_sigma = o.eta_sigma;
    if (set("--error-gain")) cfg.fnn.error_gain = o.error_gain;
    if (set("--sigma-min")) cfg.fnn.sigma_min = o.sigma_min;
    if (set("--tolerance")) cfg.fnn.tolerance = o.tolerance;
    if (set("--delta-max")) cfg.fnn.delta_max = o.delta_max;
    if (set("--init-seed")) cfg.fnn.init_seed = o.init_seed;
    cfg.validate();
    return cfg;
}

void write_sidecar(const std::filesystem::path& path, const RunConfig& cfg,
                   const ScenarioSpec& resolved, const SimTrace& trace) {
    RunConfig snapshot = cfg;
    snapshot.custom_scenario = resolved;  // freeze derived seeds and overrides
    auto j = nlohmann::json::parse(run_config_to_json(snapshot));
    j["frames_lost"] = trace.frames_lost;
    j["rows"] = trace.rows.size();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    os << j.dump(2) << '\n';
}

int cmd_run(const CLI::App* cmd, const CliOptions& o) {
    const RunConfig cfg = build_config(cmd, o);
    const ScenarioSpec spec = cfg.resolve_scenario();
    auto controller = make_controller(cfg, cfg.controller, spec.dt);
    const SimTrace trace = run_scenario(spec, *controller);

    if (cfg.fnn_save_path) {
        if (auto* fnn = dynamic_cast<FnnController*>(controller.get()))
            save_fnn_file(*cfg.fnn_save_path, fnn->state());
        else
            std::cerr << "warning: --fnn-save ignored for non-fnnc controller\n";
    }

    std::filesystem::create_directories(cfg.out_dir);
    const std::string base = run_basename(cfg);
    const auto csv_path = std::filesystem::path(cfg.out_dir) / (base + ".csv");
    const auto meta_path = std::filesystem::path(cfg.out_dir) / (base + ".json");
    write_trace_csv_file(csv_path.string(), trace);
    write_sidecar(meta_path, cfg, spec, trace);

    std::cout << "wrote " << csv_path.string() << " (" << trace.rows.size() << " rows";
    if (trace.frames_lost) std::cout << ", " << trace.frames_lost << " frames lost";
    std::cout << ")\n";
    return 0;
}

int cmd_compare(const CLI::App* cmd, const CliOptions& o,
                const std::vector<std::string>& methods, double event_flag,
                bool event_set) {
    const RunConfig base_cfg = build_config(cmd, o);
    const ScenarioSpec spec = base_cfg.resolve_scenario();

    std::vector<std::pair<std::string, SimTrace>> runs;
    for (const auto& name : methods) {
        const ControllerKind kind = controller_kind_from_string(name);
        RunConfig cfg = base_cfg;
        cfg.controller = kind;
        auto controller = make_controller(cfg, kind, spec.dt);
        runs.emplace_back(name, run_scenario(spec, *controller));
    }

    // Default measurement window: the 40 s event when the scenario has one
    // (the headline comparison point), otherwise the first event, else t=0.
    double t_event = 0.0;
    const auto times = spec.event_times();
    if (event_set) {
        t_event = event_flag;
    } else if (!times.empty()) {
        t_event = times.front();
        for (double t : times)
            if (t == 40.0) t_event = t;
    }
    double t_end = std::numeric_limits<double>::infinity();
    for (double t : times)
        if (t > t_event) {
            t_end = t;
            break;
        }

    std::vector<std::pair<std::string, const SimTrace*>> labeled;
    labeled.reserve(runs.size());
    for (const auto& [name, trace] : runs) labeled.emplace_back(name, &trace);
    const auto report = comparison_report(labeled, t_event, 0.005, t_end);

    std::filesystem::create_directories(base_cfg.out_dir);
    const std::string stem = (base_cfg.custom_scenario ? base_cfg.custom_scenario->id
                                                       : base_cfg.scenario_id) +
                             "_compare_" + std::to_string(base_cfg.seed);
    const auto csv_path = std::filesystem::path(base_cfg.out_dir) / (stem + ".csv");
    const auto txt_path = std::filesystem::path(base_cfg.out_dir) / (stem + ".txt");
    const std::string text = comparison_text(report);
    {
        std::ofstream os(csv_path, std::ios::binary);
        os << comparison_csv(report);
    }
    {
        std::ofstream os(txt_path, std::ios::binary);
        os << text;
    }
    std::cout << "event window [" << t_event << ", "
              << (std::isfinite(t_end) ? std::to_string(t_end) : "end") << ") s\n"
              << text << "wrote " << csv_path.string() << '\n';
    return 0;
}

int cmd_serve(const CLI::App* cmd, const CliOptions& o, const std::string& listen,
              double drop_rate, std::uint64_t drop_seed, int latency_ms) {
    RunConfig cfg = build_config(cmd, o);
    if (cfg.controller == ControllerKind::remote)
        throw std::invalid_argument("serve needs a local controller kind");
    auto [host, port] = parse_endpoint(listen);
    ServeOptions opts;
    opts.drop_rate = drop_rate;
    opts.drop_seed = drop_seed;
    opts.latency_ms = latency_ms;
    auto controller = make_controller(cfg, cfg.controller, cfg.resolve_scenario().dt);
    HilServer server(host, port, std::move(controller), opts);
    std::cout << "listening on " << host << ":" << server.port() << std::endl;
    server.run();
    return 0;
}

int cmd_list_scenarios() {
    for (const auto& id : builtin_scenario_ids()) {
        const ScenarioSpec s = builtin_scenario(id);
        std::cout << id << ": " << s.duration << " s, " << s.events.size() << " step event"
                  << (s.events.size() == 1 ? "" : "s") << ", " << s.profiles.size()
                  << " stochastic profile" << (s.profiles.size() == 1 ? "" : "s");
        if (s.flags.constraints) std::cout << ", constraints on";
        std::cout << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"microgrid frequency simulator with adaptive VSG control"};
    app.require_subcommand(1);

    CliOptions run_opts;
    CLI::App* run = app.add_subcommand("run", "simulate one scenario/controller pair");
    add_common_options(run, run_opts, true);

    CliOptions cmp_opts;
    std::vector<std::string> methods{"none", "fixed", "fuzzy-inertia", "fuzzy", "fnnc"};
    double event_time = 0.0;
    CLI::App* cmp = app.add_subcommand("compare", "run several controllers on one stream");
    add_common_options(cmp, cmp_opts, false);
    cmp->add_option("-m,--methods", methods, "controller kinds to compare");
    CLI::Option* event_opt =
        cmp->add_option("--event", event_time, "measurement window start [s]");

    CliOptions serve_opts;
    std::string listen = "127.0.0.1:9000";
    double drop_rate = 0.0;
    std::uint64_t drop_seed = 1;
    int latency_ms = 0;
    CLI::App* serve = app.add_subcommand("serve", "expose a controller over UDP");
    add_common_options(serve, serve_opts, true);
    serve->add_option("-l,--listen", listen, "bind address host:port (port 0 = any)");
    serve->add_option("--drop-rate", drop_rate, "inject request loss [0,1]");
    serve->add_option("--drop-seed", drop_seed, "seed for injected loss");
    serve->add_option("--latency-ms", latency_ms, "inject reply delay");

    CLI::App* list = app.add_subcommand("list-scenarios", "print built-in scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) return cmd_run(run, run_opts);
        if (cmp->parsed())
            return cmd_compare(cmp, cmp_opts, methods, event_time,
                               event_opt->count() > 0);
        if (serve->parsed())
            return cmd_serve(serve, serve_opts, listen, drop_rate, drop_seed, latency_ms);
        if (list->parsed()) return cmd_list_scenarios();
    } catch (const DivergenceError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 1;
    } catch (const TrainingDivergenceError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
