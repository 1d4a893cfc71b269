#include "vsgsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace vsgsim {

std::vector<double> rocof_series(const SimTrace& trace, double window) {
    const auto n = trace.rows.size();
    const double dt = trace.dt;
    if (!(dt > 0)) throw std::invalid_argument("rocof: non-positive dt");
    if (!(window >= dt)) throw std::invalid_argument("rocof: window below dt");
    if (n < 2 || static_cast<double>(n - 1) * dt < window)
        throw std::invalid_argument("rocof: trace shorter than the window");

    std::vector<double> diff(n, 0.0);
    diff[0] = (trace.rows[1].freq_dev - trace.rows[0].freq_dev) / dt;
    diff[n - 1] = (trace.rows[n - 1].freq_dev - trace.rows[n - 2].freq_dev) / dt;
    for (std::size_t i = 1; i + 1 < n; ++i)
        diff[i] = (trace.rows[i + 1].freq_dev - trace.rows[i - 1].freq_dev) / (2.0 * dt);

    const auto half = static_cast<std::size_t>(std::llround(0.5 * window / dt));
    if (half == 0) return diff;
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(n - 1, i + half);
        double sum = 0.0;
        for (std::size_t k = lo; k <= hi; ++k) sum += diff[k];
        out[i] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

DisturbanceMetrics disturbance_metrics(const SimTrace& trace, double t_event,
                                       double band, double t_end) {
    if (trace.rows.empty()) throw std::invalid_argument("metrics: empty trace");
    if (!(band > 0)) throw std::invalid_argument("metrics: band must be positive");

    const auto& rows = trace.rows;
    std::size_t first = rows.size();
    std::size_t last = rows.size();  // one past the window
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (first == rows.size() && rows[i].t >= t_event) first = i;
        if (rows[i].t < t_end) last = i + 1;
    }
    if (first >= last) throw std::invalid_argument("metrics: empty event window");

    DisturbanceMetrics m;
    for (std::size_t i = first; i < last; ++i)
        m.overshoot_mhz = std::max(m.overshoot_mhz, std::abs(rows[i].freq_dev) * 1e3);

    // Last in-window sample outside the band decides the settling instant.
    std::size_t settle = first;
    for (std::size_t i = first; i < last; ++i)
        if (std::abs(rows[i].freq_dev) > band) settle = i + 1;
    if (settle >= last) {
        m.settled = false;
        m.settling_s = rows[last - 1].t - t_event;
    } else {
        m.settling_s = rows[settle].t - t_event;
    }

    const double span = static_cast<double>(rows.size() - 1) * trace.dt;
    const double window = std::min(0.1, span);
    const auto rocof = rocof_series(trace, window);
    for (std::size_t i = first; i < last; ++i)
        m.peak_rocof = std::max(m.peak_rocof, std::abs(rocof[i]));
    return m;
}

std::vector<MethodMetrics> comparison_report(
    const std::vector<std::pair<std::string, const SimTrace*>>& traces,
    double t_event, double band, double t_end) {
    if (traces.empty()) throw std::invalid_argument("report: no traces");
    for (const auto& [label, trace] : traces) {
        if (trace == nullptr) throw std::invalid_argument("report: null trace");
        if (trace->rows.size() != traces.front().second->rows.size() ||
            trace->dt != traces.front().second->dt)
            throw std::invalid_argument("report: trace grids differ");
    }
    std::vector<MethodMetrics> rows;
    rows.reserve(traces.size());
    for (const auto& [label, trace] : traces)
        rows.push_back({label, disturbance_metrics(*trace, t_event, band, t_end)});
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return a.metrics.overshoot_mhz > b.metrics.overshoot_mhz;
    });
    return rows;
}

std::string comparison_text(const std::vector<MethodMetrics>& rows) {
    std::ostringstream os;
    os << "method            overshoot_mhz  settling_s  peak_rocof\n";
    for (const auto& r : rows) {
        os << r.method;
        for (std::size_t i = r.method.size(); i < 18; ++i) os << ' ';
        char buf[96];
        std::snprintf(buf, sizeof buf, "%13.3f  %10.3f  %10.3f", r.metrics.overshoot_mhz,
                      r.metrics.settling_s, r.metrics.peak_rocof);
        os << buf;
        if (!r.metrics.settled) os << "  (did not settle)";
        os << '\n';
    }
    return os.str();
}

std::string comparison_csv(const std::vector<MethodMetrics>& rows) {
    std::string out = "method,overshoot_mhz,settling_s,peak_rocof\n";
    for (const auto& r : rows) {
        out += r.method;
        out += ',';
        out += format_double(r.metrics.overshoot_mhz);
        out += ',';
        out += format_double(r.metrics.settling_s);
        out += ',';
        out += format_double(r.metrics.peak_rocof);
        out += '\n';
    }
    return out;
}

}  // namespace vsgsim
