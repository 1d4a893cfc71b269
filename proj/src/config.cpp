#include "vsgsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "vsgsim/hil.hpp"

namespace vsgsim {

namespace {

using nlohmann::json;

json params_to_json(const PlantParams& p) {
    return json{
        {"integral_gain", p.integral_gain},
        {"bias", p.bias},
        {"droop", p.droop},
        {"t_governor", p.t_governor},
        {"t_turbine", p.t_turbine},
        {"t_wind", p.t_wind},
        {"t_solar", p.t_solar},
        {"t_ess", p.t_ess},
        {"inertia", p.inertia},
        {"damping", p.damping},
        {"valve_min", p.valve_min},
        {"valve_max", p.valve_max},
        {"dead_band", p.dead_band},
        {"grc", p.grc},
        {"delay", p.delay},
        {"ess_cap", p.ess_cap},
    };
}

PlantParams params_from_json(const json& j) {
    PlantParams p;
    p.integral_gain = j.value("integral_gain", p.integral_gain);
    p.bias = j.value("bias", p.bias);
    p.droop = j.value("droop", p.droop);
    p.t_governor = j.value("t_governor", p.t_governor);
    p.t_turbine = j.value("t_turbine", p.t_turbine);
    p.t_wind = j.value("t_wind", p.t_wind);
    p.t_solar = j.value("t_solar", p.t_solar);
    p.t_ess = j.value("t_ess", p.t_ess);
    p.inertia = j.value("inertia", p.inertia);
    p.damping = j.value("damping", p.damping);
    p.valve_min = j.value("valve_min", p.valve_min);
    p.valve_max = j.value("valve_max", p.valve_max);
    p.dead_band = j.value("dead_band", p.dead_band);
    p.grc = j.value("grc", p.grc);
    p.delay = j.value("delay", p.delay);
    p.ess_cap = j.value("ess_cap", p.ess_cap);
    return p;
}

json scenario_to_json_obj(const ScenarioSpec& s) {
    json events = json::array();
    for (const auto& e : s.events)
        events.push_back({{"time", e.time},
                          {"channel", std::string(to_string(e.channel))},
                          {"delta", e.delta}});
    json profiles = json::array();
    for (const auto& p : s.profiles) {
        json jp{{"channel", std::string(to_string(p.channel))},
                {"min", p.min},
                {"max", p.max},
                {"hold", p.hold},
                {"start", p.start},
                {"seed", p.seed}};
        if (std::isfinite(p.stop)) jp["stop"] = p.stop;
        profiles.push_back(jp);
    }
    return json{
        {"id", s.id},
        {"duration", s.duration},
        {"dt", s.dt},
        {"events", events},
        {"profiles", profiles},
        {"flags", {{"constraints", s.flags.constraints}, {"ess", s.flags.ess}}},
        {"params", params_to_json(s.params)},
    };
}

ScenarioSpec scenario_from_json_obj(const json& j) {
    ScenarioSpec s;
    s.id = j.value("id", std::string("custom"));
    s.duration = j.value("duration", s.duration);
    s.dt = j.value("dt", s.dt);
    for (const auto& je : j.value("events", json::array())) {
        StepEvent e;
        e.time = je.at("time").get<double>();
        e.channel = channel_from_string(je.at("channel").get<std::string>());
        e.delta = je.at("delta").get<double>();
        s.events.push_back(e);
    }
    for (const auto& jp : j.value("profiles", json::array())) {
        StochasticProfile p;
        p.channel = channel_from_string(jp.at("channel").get<std::string>());
        p.min = jp.at("min").get<double>();
        p.max = jp.at("max").get<double>();
        p.hold = jp.value("hold", p.hold);
        p.start = jp.value("start", p.start);
        if (jp.contains("stop")) p.stop = jp.at("stop").get<double>();
        p.seed = jp.value("seed", p.seed);
        s.profiles.push_back(p);
    }
    if (j.contains("flags")) {
        const auto& jf = j.at("flags");
        s.flags.constraints = jf.value("constraints", s.flags.constraints);
        s.flags.ess = jf.value("ess", s.flags.ess);
    }
    if (j.contains("params")) s.params = params_from_json(j.at("params"));
    s.validate();
    return s;
}

json fnn_options_to_json(const FnnOptions& o) {
    return json{
        {"eta_w", o.eta_w},         {"eta_m", o.eta_m},
        {"eta_sigma", o.eta_sigma}, {"error_gain", o.error_gain},
        {"sigma_min", o.sigma_min}, {"tolerance", o.tolerance},
        {"delta_max", o.delta_max}, {"init_seed", o.init_seed},
    };
}

FnnOptions fnn_options_from_json(const json& j) {
    FnnOptions o;
    o.eta_w = j.value("eta_w", o.eta_w);
    o.eta_m = j.value("eta_m", o.eta_m);
    o.eta_sigma = j.value("eta_sigma", o.eta_sigma);
    o.error_gain = j.value("error_gain", o.error_gain);
    o.sigma_min = j.value("sigma_min", o.sigma_min);
    o.tolerance = j.value("tolerance", o.tolerance);
    o.delta_max = j.value("delta_max", o.delta_max);
    o.init_seed = j.value("init_seed", o.init_seed);
    return o;
}

json rule_table_to_json(const RuleTable& t) {
    json rows = json::array();
    for (const auto& row : t) {
        json r = json::array();
        for (auto v : row) r.push_back(static_cast<int>(v));
        rows.push_back(r);
    }
    return rows;
}

RuleTable rule_table_from_json(const json& j) {
    RuleTable t{};
    if (j.size() != t.size()) throw std::invalid_argument("rule table needs 3 rows");
    for (std::size_t r = 0; r < t.size(); ++r) {
        if (j[r].size() != t[r].size())
            throw std::invalid_argument("rule table rows need 5 entries");
        for (std::size_t c = 0; c < t[r].size(); ++c)
            t[r][c] = static_cast<std::uint8_t>(j[r][c].get<int>());
    }
    return t;
}

json fuzzy_to_json_obj(const FuzzyConfig& c) {
    return json{
        {"freq_min", c.freq_min},
        {"freq_max", c.freq_max},
        {"res_min", c.res_min},
        {"res_max", c.res_max},
        {"inertia_anchors", c.inertia_anchors},
        {"damping_anchors", c.damping_anchors},
        {"droop_anchors", c.droop_anchors},
        {"inertia_rules", rule_table_to_json(c.inertia_rules)},
        {"damping_rules", rule_table_to_json(c.damping_rules)},
        {"droop_rules", rule_table_to_json(c.droop_rules)},
    };
}

template <std::size_t N>
void read_anchors(const json& j, const char* key, std::array<double, N>& out) {
    if (!j.contains(key)) return;
    const auto& a = j.at(key);
    if (a.size() != N)
        throw std::invalid_argument(std::string(key) + " needs " + std::to_string(N) +
                                    " values");
    for (std::size_t i = 0; i < N; ++i) out[i] = a[i].get<double>();
}

FuzzyConfig fuzzy_from_json_obj(const json& j) {
    FuzzyConfig c = FuzzyConfig::defaults();
    c.freq_min = j.value("freq_min", c.freq_min);
    c.freq_max = j.value("freq_max", c.freq_max);
    c.res_min = j.value("res_min", c.res_min);
    c.res_max = j.value("res_max", c.res_max);
    read_anchors(j, "inertia_anchors", c.inertia_anchors);
    read_anchors(j, "damping_anchors", c.damping_anchors);
    read_anchors(j, "droop_anchors", c.droop_anchors);
    if (j.contains("inertia_rules")) c.inertia_rules = rule_table_from_json(j.at("inertia_rules"));
    if (j.contains("damping_rules")) c.damping_rules = rule_table_from_json(j.at("damping_rules"));
    if (j.contains("droop_rules")) c.droop_rules = rule_table_from_json(j.at("droop_rules"));
    c.validate();
    return c;
}

json run_config_to_json_obj(const RunConfig& cfg) {
    json j{
        {"scenario", cfg.scenario_id},
        {"controller", std::string(to_string(cfg.controller))},
        {"seed", cfg.seed},
        {"out_dir", cfg.out_dir},
        {"fnn", fnn_options_to_json(cfg.fnn)},
        {"fuzzy", fuzzy_to_json_obj(cfg.fuzzy)},
        {"timeout_ms", cfg.timeout_ms},
    };
    if (cfg.custom_scenario) j["custom_scenario"] = scenario_to_json_obj(*cfg.custom_scenario);
    if (cfg.dt) j["dt"] = *cfg.dt;
    if (!cfg.endpoint.empty()) j["endpoint"] = cfg.endpoint;
    if (cfg.fnn_load_path) j["fnn_load"] = *cfg.fnn_load_path;
    if (cfg.fnn_save_path) j["fnn_save"] = *cfg.fnn_save_path;
    return j;
}

RunConfig run_config_from_json_obj(const json& j) {
    RunConfig cfg;
    cfg.scenario_id = j.value("scenario", cfg.scenario_id);
    if (j.contains("custom_scenario"))
        cfg.custom_scenario = scenario_from_json_obj(j.at("custom_scenario"));
    if (j.contains("controller"))
        cfg.controller = controller_kind_from_string(j.at("controller").get<std::string>());
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("dt")) cfg.dt = j.at("dt").get<double>();
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    if (j.contains("fnn")) cfg.fnn = fnn_options_from_json(j.at("fnn"));
    if (j.contains("fuzzy")) cfg.fuzzy = fuzzy_from_json_obj(j.at("fuzzy"));
    cfg.endpoint = j.value("endpoint", cfg.endpoint);
    cfg.timeout_ms = j.value("timeout_ms", cfg.timeout_ms);
    if (j.contains("fnn_load")) cfg.fnn_load_path = j.at("fnn_load").get<std::string>();
    if (j.contains("fnn_save")) cfg.fnn_save_path = j.at("fnn_save").get<std::string>();
    return cfg;
}

}  // namespace

ScenarioSpec RunConfig::resolve_scenario() const {
    ScenarioSpec s;
    if (custom_scenario) {
        // Explicit profile seeds in a custom scenario are respected as-is, so
        // a metadata sidecar reproduces its run exactly.
        s = *custom_scenario;
    } else {
        s = builtin_scenario(scenario_id);
        s.reseed(seed);
    }
    if (dt) s.dt = *dt;
    s.validate();
    return s;
}

void RunConfig::validate() const {
    if (controller == ControllerKind::remote && endpoint.empty())
        throw std::invalid_argument("remote controller needs an endpoint");
    if (timeout_ms <= 0) throw std::invalid_argument("timeout must be positive");
    if (fnn.eta_w < 0 || fnn.eta_m < 0 || fnn.eta_sigma < 0)
        throw std::invalid_argument("learning rates must be non-negative");
    if (!(fnn.error_gain > 0)) throw std::invalid_argument("error gain must be positive");
    if (!(fnn.sigma_min > 0)) throw std::invalid_argument("sigma floor must be positive");
    if (fnn.tolerance < 0) throw std::invalid_argument("tolerance must be non-negative");
    fuzzy.validate();
    resolve_scenario();
}

RunConfig run_config_from_json(const std::string& text) {
    return run_config_from_json_obj(json::parse(text));
}

RunConfig run_config_from_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    json j;
    is >> j;
    return run_config_from_json_obj(j);
}

std::string run_config_to_json(const RunConfig& cfg) {
    return run_config_to_json_obj(cfg).dump(2) + "\n";
}

ScenarioSpec scenario_from_json(const std::string& text) {
    return scenario_from_json_obj(json::parse(text));
}

std::string scenario_to_json(const ScenarioSpec& spec) {
    return scenario_to_json_obj(spec).dump(2) + "\n";
}

FuzzyConfig fuzzy_config_from_json(const std::string& text) {
    return fuzzy_from_json_obj(json::parse(text));
}

std::string fuzzy_config_to_json(const FuzzyConfig& cfg) {
    return fuzzy_to_json_obj(cfg).dump(2) + "\n";
}

std::string run_basename(const RunConfig& cfg) {
    std::string base = (cfg.custom_scenario ? cfg.custom_scenario->id : cfg.scenario_id);
    base += "_";
    base += to_string(cfg.controller);
    base += "_";
    base += std::to_string(cfg.seed);
    for (char& ch : base) {
        const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                        (ch >= '0' && ch <= '9') || ch == '.' || ch == '_' || ch == '-';
        if (!ok) ch = '-';
    }
    return base;
}

std::unique_ptr<Controller> make_controller(const RunConfig& cfg, ControllerKind kind,
                                            double dt) {
    switch (kind) {
        case ControllerKind::none:
            return std::make_unique<NoneController>();
        case ControllerKind::fixed:
            return std::make_unique<FixedController>();
        case ControllerKind::fuzzy:
            return std::make_unique<FuzzyController>(cfg.fuzzy);
        case ControllerKind::fuzzy_inertia:
            return std::make_unique<FuzzyInertiaController>(cfg.fuzzy);
        case ControllerKind::fnnc:
            if (cfg.fnn_load_path)
                return std::make_unique<FnnController>(load_fnn_file(*cfg.fnn_load_path), dt);
            return std::make_unique<FnnController>(cfg.fnn, dt);
        case ControllerKind::remote: {
            auto [host, port] = parse_endpoint(cfg.endpoint);
            return std::make_unique<RemoteController>(host, port, cfg.timeout_ms);
        }
    }
    throw std::invalid_argument("unknown controller kind");
}

}  // namespace vsgsim
