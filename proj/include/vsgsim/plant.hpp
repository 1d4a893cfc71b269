#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "vsgsim/controller.hpp"

namespace vsgsim {

/// Thrown when any plant channel leaves the finite range; carries the name of
/// the offending channel.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::string channel, double t);
    const std::string& channel() const { return channel_; }

private:
    std::string channel_;
};

/// Nominal system frequency; the governor dead band is specified as a
/// fraction of it.
inline constexpr double kNominalFrequencyHz = 50.0;

/// Single-area microgrid constants. Defaults are the Scenario I/II set.
struct PlantParams {
    double integral_gain = 0.2;  // secondary-loop gain K, 1/s
    double bias = 0.99;          // frequency bias beta, p.u.MW/Hz
    double droop = 2.4;          // governor droop R, Hz/p.u.MW
    double t_governor = 0.1;     // s
    double t_turbine = 0.4;      // s
    double t_wind = 1.4;         // s
    double t_solar = 1.9;        // s
    double t_ess = 5.0;          // s
    double inertia = 0.082;      // H, p.u.MW*s
    double damping = 0.016;      // D, p.u.MW/Hz
    double valve_min = -0.5;     // p.u.MW
    double valve_max = 0.5;      // p.u.MW
    double dead_band = 0.0;      // fraction of nominal frequency
    double grc = 0.0;            // generation rate constraint, p.u.MW/s; 0 = off
    double delay = 0.0;          // secondary-loop delay, s
    double ess_cap = 0.29;       // inverter power limit, p.u.

    /// Throws std::invalid_argument when any invariant is violated.
    void validate() const;
};

/// Disturbance inputs held constant over one tick.
struct PlantInputs {
    double wind = 0.0;   // p.u.
    double solar = 0.0;  // p.u.
    double load = 0.0;   // p.u.
};

struct SimFlags {
    bool constraints = false;  // dead band, valve limits, GRC
    bool ess = true;           // VSG/ESS channel in the loop
};

/// State of every first-order block plus the secondary integrator and its
/// delay line.
struct PlantState {
    double turbine = 0.0;    // p.u.
    double governor = 0.0;   // p.u.
    double wind = 0.0;       // p.u.
    double solar = 0.0;      // p.u.
    double ess = 0.0;        // p.u.
    double secondary = 0.0;  // integrator state, p.u.
    std::vector<double> delay_line;
    std::size_t delay_pos = 0;
    double freq_dev = 0.0;       // Hz
    double prev_freq_dev = 0.0;  // Hz, one tick earlier
    double t = 0.0;              // s

    /// Zero state with the delay line sized for the given params and dt.
    static PlantState initial(const PlantParams& params, double dt);

    /// Equilibrium state for the given operating point: the conventional
    /// units are pre-dispatched to cover the net load at t = 0 so a run
    /// begins on a settled grid instead of a cold-start transient.
    static PlantState initial(const PlantParams& params, double dt,
                              const PlantInputs& inputs);
};

/// One exact zero-order-hold step of dy/dt = (gain*input - y) / time_constant.
double first_order_lag_step(double state, double input, double gain,
                            double time_constant, double dt);

/// Governor lag driven by the secondary command minus the frequency feedback
/// through the droop; dead band and valve limits apply only with constraints
/// enabled. Returns the new governor output.
double step_governor(PlantState& state, double freq_dev, double secondary_cmd,
                     const PlantParams& params, const SimFlags& flags, double dt);

/// Integrates the secondary loop and returns its (possibly delayed) command.
double step_secondary(PlantState& state, double freq_dev, const PlantParams& params,
                      double dt);

/// Advances d(freq_dev)/dt = (net_power - damping*freq_dev) / (2*inertia).
double step_swing(double freq_dev, double net_power, double inertia, double damping,
                  double dt);

/// One full tick: secondary, governor, turbine (with GRC), wind, solar,
/// ESS/VSG, swing, in that order, all frequency feedback taken from the
/// previous tick. Returns the per-channel values now active in the state.
struct TickOutputs {
    double secondary_cmd = 0.0;
};
TickOutputs simulate_tick(PlantState& state, const PlantInputs& inputs,
                          const VirtualParams& vp, const PlantParams& params,
                          const SimFlags& flags, double dt);

}  // namespace vsgsim
