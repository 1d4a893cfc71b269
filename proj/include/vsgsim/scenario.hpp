#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vsgsim/plant.hpp"

namespace vsgsim {

enum class Channel { wind, solar, load, renewables };

std::string_view to_string(Channel c);
Channel channel_from_string(std::string_view name);

/// Additive step applied to a channel from `time` onward. The combined
/// `renewables` channel splits 60/40 between wind and solar, matching the
/// declared plant ratings.
struct StepEvent {
    double time = 0.0;
    Channel channel = Channel::load;
    double delta = 0.0;  // p.u.
};

/// Piecewise-constant band-limited noise: a fresh uniform draw in
/// [min, max] every `hold` seconds while t is inside [start, stop).
/// Draws are a pure function of (seed, interval index), so any sample is
/// reproducible without generator state.
struct StochasticProfile {
    Channel channel = Channel::load;
    double min = 0.0;
    double max = 0.0;
    double hold = 2.0;  // s
    double start = 0.0;
    double stop = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;
};

/// Scenario III parameter perturbation; unset fields keep the base value.
struct UncertaintySet {
    std::optional<double> t_governor;
    std::optional<double> t_turbine;
    std::optional<double> inertia;
    std::optional<double> damping;
    std::optional<double> delay;
    std::optional<double> valve_min;
    std::optional<double> valve_max;
    std::optional<double> dead_band;

    bool empty() const;
};

struct ScenarioSpec {
    std::string id;
    double duration = 80.0;  // s
    double dt = 0.01;        // s
    std::vector<StepEvent> events;  // sorted by time
    std::vector<StochasticProfile> profiles;
    SimFlags flags;
    PlantParams params;

    void validate() const;

    /// Derives one deterministic seed per profile from the run seed.
    void reseed(std::uint64_t run_seed);

    /// Event times, deduplicated, ascending; the windows used by the
    /// per-disturbance metrics.
    std::vector<double> event_times() const;
};

std::vector<std::string> builtin_scenario_ids();
ScenarioSpec builtin_scenario(std::string_view id);  // throws std::invalid_argument

/// The degraded-plant overrides applied by Scenario III.
UncertaintySet scenario_iii_uncertainty();

PlantParams apply_uncertainty(const PlantParams& base, const UncertaintySet& u);

/// Sum of all active step events and stochastic profiles at time t.
PlantInputs inputs_at(const ScenarioSpec& spec, double t);

}  // namespace vsgsim
