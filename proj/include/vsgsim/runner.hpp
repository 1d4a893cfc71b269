#pragma once

#include "vsgsim/controller.hpp"
#include "vsgsim/scenario.hpp"
#include "vsgsim/trace.hpp"

namespace vsgsim {

/// Runs one scenario against one controller. The trace has
/// duration/dt + 1 rows; row k holds the state at t = k*dt and the virtual
/// parameters the controller returned at that tick.
SimTrace run_scenario(const ScenarioSpec& spec, Controller& controller);

}  // namespace vsgsim
