#include "vsgsim/plant.hpp"

#include <algorithm>
#include <cmath>

namespace vsgsim {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("plant params: ") + what);
}

void check_finite(double v, const char* channel, double t) {
    if (!std::isfinite(v)) throw DivergenceError(channel, t);
}

}  // namespace

DivergenceError::DivergenceError(std::string channel, double t)
    : std::runtime_error("non-finite value in channel '" + channel +
                         "' at t=" + std::to_string(t) + " s"),
      channel_(std::move(channel)) {}

void PlantParams::validate() const {
    require(t_governor > 0 && t_turbine > 0 && t_wind > 0 && t_solar > 0 && t_ess > 0,
            "all time constants must be positive");
    require(inertia > 0, "inertia must be positive");
    require(damping >= 0, "damping must be non-negative");
    require(droop > 0, "droop must be positive");
    require(bias > 0, "bias must be positive");
    require(ess_cap > 0, "ess_cap must be positive");
    require(valve_min < valve_max, "valve_min must be below valve_max");
    require(dead_band >= 0, "dead_band must be non-negative");
    require(grc >= 0, "grc must be non-negative");
    require(delay >= 0, "delay must be non-negative");
    require(integral_gain >= 0, "integral gain must be non-negative");
}

PlantState PlantState::initial(const PlantParams& params, double dt) {
    params.validate();
    if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
    PlantState st;
    if (params.delay > 0) {
        // Quantized to whole ticks; the line is never resized mid-run.
        auto steps = static_cast<std::size_t>(std::ceil(params.delay / dt - 1e-9));
        st.delay_line.assign(std::max<std::size_t>(steps, 1), 0.0);
    }
    return st;
}

PlantState PlantState::initial(const PlantParams& params, double dt,
                               const PlantInputs& inputs) {
    PlantState st = initial(params, dt);
    // Renewables deliver their commanded power and the conventional chain
    // covers the remainder, so every derivative is zero at t = 0.
    st.wind = inputs.wind;
    st.solar = inputs.solar;
    const double residual = inputs.load - inputs.wind - inputs.solar;
    st.secondary = residual;
    st.governor = residual;
    st.turbine = residual;
    for (double& slot : st.delay_line) slot = residual;
    return st;
}

double first_order_lag_step(double state, double input, double gain,
                            double time_constant, double dt) {
    check_finite(state, "lag-state", 0.0);
    check_finite(input, "lag-input", 0.0);
    const double alpha = 1.0 - std::exp(-dt / time_constant);
    return state + (gain * input - state) * alpha;
}

double step_secondary(PlantState& state, double freq_dev, const PlantParams& params,
                      double dt) {
    state.secondary -= params.integral_gain * params.bias * freq_dev * dt;
    if (state.delay_line.empty()) return state.secondary;
    // n-slot delay line: tap before overwrite gives exactly n ticks of delay.
    double out = state.delay_line[state.delay_pos];
    state.delay_line[state.delay_pos] = state.secondary;
    state.delay_pos = (state.delay_pos + 1) % state.delay_line.size();
    return out;
}

double step_governor(PlantState& state, double freq_dev, double secondary_cmd,
                     const PlantParams& params, const SimFlags& flags, double dt) {
    double feedback = freq_dev;
    if (flags.constraints && params.dead_band > 0) {
        const double window = params.dead_band * kNominalFrequencyHz;
        if (std::abs(freq_dev) <= window) feedback = 0.0;
    }
    double next = first_order_lag_step(state.governor,
                                       secondary_cmd - feedback / params.droop, 1.0,
                                       params.t_governor, dt);
    if (flags.constraints) next = std::clamp(next, params.valve_min, params.valve_max);
    state.governor = next;
    return next;
}

double step_swing(double freq_dev, double net_power, double inertia, double damping,
                  double dt) {
    if (damping > 0) {
        // Pole at damping/(2*inertia), DC gain 1/damping.
        const double alpha = 1.0 - std::exp(-dt * damping / (2.0 * inertia));
        return freq_dev + (net_power / damping - freq_dev) * alpha;
    }
    return freq_dev + dt * net_power / (2.0 * inertia);
}

TickOutputs simulate_tick(PlantState& state, const PlantInputs& inputs,
                          const VirtualParams& vp, const PlantParams& params,
                          const SimFlags& flags, double dt) {
    const double f = state.freq_dev;

    const double cmd = step_secondary(state, f, params, dt);
    check_finite(cmd, "secondary", state.t);

    step_governor(state, f, cmd, params, flags, dt);
    check_finite(state.governor, "governor", state.t);

    double turbine = first_order_lag_step(state.turbine, state.governor, 1.0,
                                          params.t_turbine, dt);
    if (flags.constraints && params.grc > 0) {
        const double max_step = params.grc * dt;
        turbine = state.turbine + std::clamp(turbine - state.turbine, -max_step, max_step);
    }
    state.turbine = turbine;
    check_finite(state.turbine, "turbine", state.t);

    state.wind = first_order_lag_step(state.wind, inputs.wind, 1.0, params.t_wind, dt);
    check_finite(state.wind, "wind", state.t);

    state.solar = first_order_lag_step(state.solar, inputs.solar, 1.0, params.t_solar, dt);
    check_finite(state.solar, "solar", state.t);

    if (flags.ess) {
        state.ess = vsg_power_step(state.ess, f, state.prev_freq_dev, vp, params.t_ess,
                                   params.ess_cap, dt);
        check_finite(state.ess, "ess", state.t);
    } else {
        state.ess = 0.0;
    }

    const double net = state.turbine + state.wind + state.solar + state.ess - inputs.load;
    const double f_next = step_swing(f, net, params.inertia, params.damping, dt);
    check_finite(f_next, "freq", state.t);

    state.prev_freq_dev = f;
    state.freq_dev = f_next;
    state.t += dt;
    return TickOutputs{cmd};
}

}  // namespace vsgsim
