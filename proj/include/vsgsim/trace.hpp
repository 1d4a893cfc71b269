#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace vsgsim {

/// One sample of every plotted quantity plus the virtual parameters that were
/// active over the following tick.
struct TraceRow {
    double t = 0.0;
    double freq_dev = 0.0;  // Hz
    double rocof = 0.0;     // Hz/s, backward difference
    double turbine = 0.0;   // p.u.
    double governor = 0.0;
    double secondary = 0.0;
    double wind = 0.0;
    double solar = 0.0;
    double ess = 0.0;
    double load = 0.0;
    double kv = 0.0;
    double dv = 0.0;
    double rv = 0.0;
};

struct SimTrace {
    double dt = 0.01;
    std::vector<TraceRow> rows;
    std::uint64_t frames_lost = 0;  // remote-controller timeouts, if any

    double duration() const { return rows.empty() ? 0.0 : rows.back().t; }
};

/// Shortest round-trip decimal form; used everywhere a float reaches a file
/// so identical runs produce identical bytes.
std::string format_double(double v);

/// Header: t,delta_f,rocof,dp_m,dp_g,dp_c,dp_w,dp_pv,dp_vi,dp_l,kv,dv,rv
void write_trace_csv(std::ostream& os, const SimTrace& trace);
void write_trace_csv_file(const std::string& path, const SimTrace& trace);
SimTrace read_trace_csv(std::istream& is);
SimTrace read_trace_csv_file(const std::string& path);

}  // namespace vsgsim
