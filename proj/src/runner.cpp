#include "vsgsim/runner.hpp"

#include <cmath>

#include "vsgsim/hil.hpp"

namespace vsgsim {

namespace {

TraceRow make_row(const PlantState& st, const PlantInputs& in, double rocof,
                  const VirtualParams& vp) {
    TraceRow r;
    r.t = st.t;
    r.freq_dev = st.freq_dev;
    r.rocof = rocof;
    r.turbine = st.turbine;
    r.governor = st.governor;
    r.secondary = st.secondary;
    r.wind = st.wind;
    r.solar = st.solar;
    r.ess = st.ess;
    r.load = in.load;
    r.kv = vp.inertia;
    r.dv = vp.damping;
    r.rv = vp.droop;
    return r;
}

}  // namespace

SimTrace run_scenario(const ScenarioSpec& spec, Controller& controller) {
    spec.validate();
    const double dt = spec.dt;
    const auto steps = static_cast<std::size_t>(std::llround(spec.duration / dt));

    PlantState state = PlantState::initial(spec.params, dt, inputs_at(spec, 0.0));
    SimFlags flags = spec.flags;
    flags.ess = flags.ess && controller.drives_ess();

    SimTrace trace;
    trace.dt = dt;
    trace.rows.reserve(steps + 1);

    for (std::size_t k = 0; k <= steps; ++k) {
        const PlantInputs in = inputs_at(spec, state.t);
        ControlInput ci;
        ci.t = state.t;
        ci.freq_dev = state.freq_dev;
        ci.rocof = k == 0 ? 0.0 : (state.freq_dev - state.prev_freq_dev) / dt;
        ci.res_power = state.wind + state.solar;
        const VirtualParams vp = controller.step(ci);

        trace.rows.push_back(make_row(state, in, ci.rocof, vp));
        if (k == steps) break;
        simulate_tick(state, in, vp, spec.params, flags, dt);
    }

    if (auto* remote = dynamic_cast<RemoteController*>(&controller))
        trace.frames_lost = remote->losses();
    return trace;
}

}  // namespace vsgsim
