#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "support.hpp"
#include "vsgsim/plant.hpp"

using namespace vsgsim;
using testsupport::Rng;
using testsupport::rel_err;

TEST_SUITE("plant") {

TEST_CASE("first-order lag matches the closed-form step response") {
    // y(t) = gain*(1 - exp(-t/T)) for a unit step from rest; the discrete
    // update is exact under zero-order hold, so the tolerance is tight.
    const double dt = 0.01;
    const double taus[] = {0.1, 0.4, 1.4, 1.9, 5.0};
    for (double T : taus) {
        double y = 0.0;
        for (int k = 1; k <= 500; ++k) {
            y = first_order_lag_step(y, 1.0, 1.0, T, dt);
            const double want = 1.0 - std::exp(-k * dt / T);
            CHECK(rel_err(y, want) < 1e-9);
        }
    }
}

TEST_CASE("first-order lag frozen single-step value") {
    // T = 0.4, dt = 0.01: 1 - exp(-0.025).
    const double y1 = first_order_lag_step(0.0, 1.0, 1.0, 0.4, 0.01);
    CHECK(y1 == doctest::Approx(0.024690087971667274).epsilon(1e-13));
    // At t = T the step response reaches 1 - 1/e.
    double y = 0.0;
    for (int k = 0; k < 40; ++k) y = first_order_lag_step(y, 1.0, 1.0, 0.4, 0.01);
    CHECK(y == doctest::Approx(0.6321205588285577).epsilon(1e-12));
}

TEST_CASE("first-order lag honors gain and converges to gain*input") {
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        const double gain = rng.uniform(0.1, 3.0);
        const double T = rng.uniform(0.05, 5.0);
        const double u = rng.uniform(-2.0, 2.0);
        double y = rng.uniform(-1.0, 1.0);
        for (int k = 0; k < 20000; ++k) y = first_order_lag_step(y, u, gain, T, 0.01);
        CHECK(std::fabs(y - gain * u) < 1e-9);
    }
}

TEST_CASE("swing step reproduces pole and DC gain") {
    PlantParams p;
    // One tick from rest with net = 0.01: (net/D)*(1 - exp(-D/(2H)*dt)).
    const double y1 = step_swing(0.0, 0.01, p.inertia, p.damping, 0.01);
    CHECK(y1 == doctest::Approx(0.0006094587522676581).epsilon(1e-13));

    // DC gain 1/D: 0.01 p.u. -> 0.625 Hz.
    double f = 0.0;
    for (int k = 0; k < 20000; ++k) f = step_swing(f, 0.01, p.inertia, p.damping, 0.01);
    CHECK(rel_err(f, 0.625) < 1e-3);
}

TEST_CASE("swing with zero damping integrates") {
    // Explicit integration: df = net/(2H)*dt each tick.
    double f = 0.0;
    f = step_swing(f, 0.01, 0.082, 0.0, 0.01);
    CHECK(f == doctest::Approx(0.01 / (2.0 * 0.082) * 0.01).epsilon(1e-15));
}

TEST_CASE("secondary loop integrates -K*beta*freq_dev") {
    PlantParams p;
    PlantState st = PlantState::initial(p, 0.01);
    const double cmd = step_secondary(st, 0.1, p, 0.01);
    CHECK(st.secondary == doctest::Approx(-0.00019800000000000002).epsilon(1e-15));
    CHECK(cmd == st.secondary);  // no delay configured
}

TEST_CASE("secondary delay line taps the value from `delay` seconds ago") {
    PlantParams p;
    p.delay = 0.05;  // 5 ticks at dt = 0.01
    PlantState st = PlantState::initial(p, 0.01);
    REQUIRE(st.delay_line.size() == 5);
    std::vector<double> integrals;
    for (int k = 0; k < 12; ++k) {
        const double cmd = step_secondary(st, 1.0, p, 0.01);
        integrals.push_back(st.secondary);
        if (k < 5)
            CHECK(cmd == 0.0);  // line still holds the initial zeros
        else
            CHECK(cmd == integrals[static_cast<std::size_t>(k) - 5]);
    }
}

TEST_CASE("delay line sizing") {
    PlantParams p;
    p.delay = 1.5;
    CHECK(PlantState::initial(p, 0.01).delay_line.size() == 150);
    p.delay = 0.0;
    CHECK(PlantState::initial(p, 0.01).delay_line.empty());
    p.delay = 0.005;  // shorter than one tick still delays by one tick
    CHECK(PlantState::initial(p, 0.01).delay_line.size() == 1);
}

TEST_CASE("governor dead band suppresses small deviations") {
    PlantParams p;
    p.dead_band = 0.0002;  // 0.01 Hz at 50 Hz nominal
    SimFlags flags;
    flags.constraints = true;

    PlantState st = PlantState::initial(p, 0.01);
    step_governor(st, 0.009, 0.0, p, flags, 0.01);
    CHECK(st.governor == 0.0);  // inside the band: no droop feedback

    PlantState st2 = PlantState::initial(p, 0.01);
    step_governor(st2, 0.02, 0.0, p, flags, 0.01);
    CHECK(st2.governor < 0.0);  // outside the band the droop acts

    // Without constraints the band is ignored.
    PlantState st3 = PlantState::initial(p, 0.01);
    step_governor(st3, 0.009, 0.0, p, SimFlags{}, 0.01);
    CHECK(st3.governor < 0.0);
}

TEST_CASE("governor valve limits clamp the lag state") {
    PlantParams p;
    SimFlags flags;
    flags.constraints = true;
    PlantState st = PlantState::initial(p, 0.01);
    for (int k = 0; k < 100000; ++k) step_governor(st, -10.0, 5.0, p, flags, 0.01);
    CHECK(st.governor <= p.valve_max + 1e-15);

    PlantState st2 = PlantState::initial(p, 0.01);
    for (int k = 0; k < 100000; ++k) step_governor(st2, 10.0, -5.0, p, flags, 0.01);
    CHECK(st2.governor >= p.valve_min - 1e-15);
}

TEST_CASE("generation rate constraint limits the turbine slew") {
    PlantParams p;
    p.grc = 0.1;
    SimFlags flags;
    flags.constraints = true;
    PlantState st = PlantState::initial(p, 0.01);
    st.governor = 1.0;  // large demand; GRC must cap the per-tick change
    double prev = st.turbine;
    for (int k = 0; k < 50; ++k) {
        simulate_tick(st, PlantInputs{}, fixed_virtual_params(), p, flags, 0.01);
        CHECK(std::fabs(st.turbine - prev) <= p.grc * 0.01 + 1e-15);
        prev = st.turbine;
    }
}

TEST_CASE("equilibrium initial state holds frequency at zero") {
    PlantParams p;
    PlantInputs in;
    in.wind = 0.12;
    in.solar = 0.05;
    in.load = 0.30;
    PlantState st = PlantState::initial(p, 0.01, in);
    CHECK(st.wind == in.wind);
    CHECK(st.solar == in.solar);
    CHECK(st.turbine == doctest::Approx(0.13).epsilon(1e-15));
    for (int k = 0; k < 1000; ++k) {
        simulate_tick(st, in, fixed_virtual_params(), p, SimFlags{}, 0.01);
        CHECK(std::fabs(st.freq_dev) < 1e-12);
    }
}

TEST_CASE("tick order uses previous-tick frequency feedback") {
    // With a one-tick-old feedback, the first tick after a load step must
    // leave every actuator untouched and only move the frequency.
    PlantParams p;
    PlantState st = PlantState::initial(p, 0.01);
    PlantInputs in;
    in.load = 0.1;
    simulate_tick(st, in, fixed_virtual_params(), p, SimFlags{}, 0.01);
    CHECK(st.turbine == 0.0);
    CHECK(st.governor == 0.0);
    CHECK(st.ess == 0.0);
    CHECK(st.freq_dev < 0.0);
}

TEST_CASE("non-finite inputs raise DivergenceError with a channel name") {
    PlantParams p;
    PlantState st = PlantState::initial(p, 0.01);
    PlantInputs in;
    in.load = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(simulate_tick(st, in, fixed_virtual_params(), p, SimFlags{}, 0.01),
                    DivergenceError);
    try {
        PlantState st2 = PlantState::initial(p, 0.01);
        simulate_tick(st2, in, fixed_virtual_params(), p, SimFlags{}, 0.01);
    } catch (const DivergenceError& e) {
        CHECK(!e.channel().empty());
    }
}

TEST_CASE("parameter validation rejects nonsense") {
    PlantParams p;
    p.inertia = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = PlantParams{};
    p.t_turbine = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = PlantParams{};
    p.valve_min = 1.0;  // above valve_max
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

}  // TEST_SUITE
