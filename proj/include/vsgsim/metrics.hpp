#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "vsgsim/trace.hpp"

namespace vsgsim {

/// Centered finite difference of the frequency deviation smoothed by a moving
/// average of `window` seconds. Throws std::invalid_argument when the trace is
/// shorter than the window.
std::vector<double> rocof_series(const SimTrace& trace, double window = 0.1);

struct DisturbanceMetrics {
    double overshoot_mhz = 0.0;
    double settling_s = 0.0;
    double peak_rocof = 0.0;  // Hz/s
    bool settled = true;
};

/// Peak |freq_dev|, band re-entry time and peak |RoCoF| over
/// [t_event, t_end).
DisturbanceMetrics disturbance_metrics(const SimTrace& trace, double t_event,
                                       double band = 0.005,
                                       double t_end = std::numeric_limits<double>::infinity());

struct MethodMetrics {
    std::string method;
    DisturbanceMetrics metrics;
};

/// Metrics per labeled trace, ranked worst overshoot first. All traces must
/// share the same sample grid.
std::vector<MethodMetrics> comparison_report(
    const std::vector<std::pair<std::string, const SimTrace*>>& traces,
    double t_event, double band = 0.005,
    double t_end = std::numeric_limits<double>::infinity());

std::string comparison_text(const std::vector<MethodMetrics>& rows);

/// Header: method,overshoot_mhz,settling_s,peak_rocof
std::string comparison_csv(const std::vector<MethodMetrics>& rows);

}  // namespace vsgsim
