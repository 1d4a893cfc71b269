#include "vsgsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "splitmix.hpp"

namespace vsgsim {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("scenario: ") + what);
}

// Combined renewables events split between the two plants in proportion to
// their rated capacities.
constexpr double kWindShare = 0.6;
constexpr double kSolarShare = 0.4;

void add_to_channel(PlantInputs& in, Channel c, double value) {
    switch (c) {
        case Channel::wind: in.wind += value; return;
        case Channel::solar: in.solar += value; return;
        case Channel::load: in.load += value; return;
        case Channel::renewables:
            in.wind += kWindShare * value;
            in.solar += kSolarShare * value;
            return;
    }
    throw std::logic_error("unknown channel");
}

double profile_value(const StochasticProfile& p, double t) {
    if (t < p.start || t >= p.stop) return 0.0;
    if (!(p.hold > 0)) return p.min;
    const auto k = static_cast<std::uint64_t>(std::floor((t - p.start) / p.hold));
    const double u = detail::uniform01(detail::mix64(p.seed, k));
    return p.min + (p.max - p.min) * u;
}

}  // namespace

std::string_view to_string(Channel c) {
    switch (c) {
        case Channel::wind: return "wind";
        case Channel::solar: return "solar";
        case Channel::load: return "load";
        case Channel::renewables: return "renewables";
    }
    throw std::logic_error("unknown channel");
}

Channel channel_from_string(std::string_view name) {
    if (name == "wind") return Channel::wind;
    if (name == "solar") return Channel::solar;
    if (name == "load") return Channel::load;
    if (name == "renewables") return Channel::renewables;
    throw std::invalid_argument("unknown channel '" + std::string(name) + "'");
}

bool UncertaintySet::empty() const {
    return !t_governor && !t_turbine && !inertia && !damping && !delay && !valve_min &&
           !valve_max && !dead_band;
}

void ScenarioSpec::validate() const {
    require(!id.empty(), "id must be non-empty");
    require(duration > 0, "duration must be positive");
    require(dt > 0 && dt < duration, "dt must be positive and below the duration");
    double prev = -1.0;
    for (const auto& e : events) {
        require(e.time >= 0 && e.time <= duration, "event time outside the run");
        require(e.time >= prev, "events must be sorted by time");
        prev = e.time;
    }
    for (const auto& p : profiles) {
        require(p.min <= p.max, "profile range inverted");
        require(p.hold > 0, "profile hold interval must be positive");
        require(p.start < p.stop, "profile start must precede its stop");
    }
    params.validate();
}

void ScenarioSpec::reseed(std::uint64_t run_seed) {
    for (std::size_t i = 0; i < profiles.size(); ++i)
        profiles[i].seed = detail::mix64(run_seed, static_cast<std::uint64_t>(i) + 1);
}

std::vector<double> ScenarioSpec::event_times() const {
    std::vector<double> times;
    times.reserve(events.size());
    for (const auto& e : events) times.push_back(e.time);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    return times;
}

std::vector<std::string> builtin_scenario_ids() {
    return {"I", "II-case1", "II-case2", "III"};
}

UncertaintySet scenario_iii_uncertainty() {
    UncertaintySet u;
    u.t_governor = 0.15;
    u.t_turbine = 0.5;
    u.inertia = 0.05;
    u.damping = 0.02;
    u.delay = 1.5;
    u.valve_min = -0.5;
    u.valve_max = 0.5;
    u.dead_band = 0.0002;
    return u;
}

PlantParams apply_uncertainty(const PlantParams& base, const UncertaintySet& u) {
    PlantParams p = base;
    if (u.t_governor) p.t_governor = *u.t_governor;
    if (u.t_turbine) p.t_turbine = *u.t_turbine;
    if (u.inertia) p.inertia = *u.inertia;
    if (u.damping) p.damping = *u.damping;
    if (u.delay) p.delay = *u.delay;
    if (u.valve_min) p.valve_min = *u.valve_min;
    if (u.valve_max) p.valve_max = *u.valve_max;
    if (u.dead_band) p.dead_band = *u.dead_band;
    p.validate();
    return p;
}

ScenarioSpec builtin_scenario(std::string_view id) {
    ScenarioSpec s;
    s.id = std::string(id);
    if (id == "I" || id == "III") {
        s.duration = 80.0;
        s.events = {
            {5.0, Channel::renewables, 0.1},
            {20.0, Channel::load, 0.1},
            {40.0, Channel::load, -0.1},
            {60.0, Channel::renewables, -0.1},
        };
        if (id == "III") {
            s.params = apply_uncertainty(s.params, scenario_iii_uncertainty());
            s.params.grc = 0.1;
            s.flags.constraints = true;
        }
    } else if (id == "II-case1") {
        s.duration = 100.0;
        s.profiles = {
            {Channel::wind, 0.10, 0.12},
            {Channel::solar, 0.08, 0.09},
            {Channel::load, 0.10, 0.30},
        };
    } else if (id == "II-case2") {
        s.duration = 100.0;
        s.profiles = {
            {Channel::load, 0.05, 0.10},
            {Channel::wind, 0.20, 0.30},
            {Channel::solar, 0.10, 0.20},
        };
        s.profiles[1].start = 10.0;
        s.profiles[2].start = 10.0;
        s.profiles[2].stop = 50.0;
    } else {
        throw std::invalid_argument("unknown scenario '" + std::string(id) + "'");
    }
    s.reseed(42);
    return s;
}

PlantInputs inputs_at(const ScenarioSpec& spec, double t) {
    PlantInputs in;
    for (const auto& e : spec.events) {
        if (e.time > t) break;
        add_to_channel(in, e.channel, e.delta);
    }
    for (const auto& p : spec.profiles) add_to_channel(in, p.channel, profile_value(p, t));
    return in;
}

}  // namespace vsgsim
