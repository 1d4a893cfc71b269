#include "vsgsim/trace.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace vsgsim {

namespace {

constexpr const char* kHeader = "t,delta_f,rocof,dp_m,dp_g,dp_c,dp_w,dp_pv,dp_vi,dp_l,kv,dv,rv";
constexpr int kColumns = 13;

double parse_field(std::string_view text, std::size_t line_no) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || p != text.data() + text.size() || !std::isfinite(v))
        throw std::runtime_error("trace csv: bad value '" + std::string(text) +
                                 "' on line " + std::to_string(line_no));
    return v;
}

}  // namespace

std::string format_double(double v) {
    std::array<char, 32> buf;
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw std::runtime_error("double formatting failed");
    return std::string(buf.data(), p);
}

void write_trace_csv(std::ostream& os, const SimTrace& trace) {
    os << kHeader << '\n';
    for (const auto& r : trace.rows) {
        os << format_double(r.t) << ',' << format_double(r.freq_dev) << ','
           << format_double(r.rocof) << ',' << format_double(r.turbine) << ','
           << format_double(r.governor) << ',' << format_double(r.secondary) << ','
           << format_double(r.wind) << ',' << format_double(r.solar) << ','
           << format_double(r.ess) << ',' << format_double(r.load) << ','
           << format_double(r.kv) << ',' << format_double(r.dv) << ','
           << format_double(r.rv) << '\n';
    }
}

SimTrace read_trace_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("trace csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader) throw std::runtime_error("trace csv: unrecognized header");

    SimTrace trace;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::array<std::string_view, kColumns> fields;
        std::string_view rest = line;
        for (int c = 0; c < kColumns; ++c) {
            const auto comma = rest.find(',');
            if (c < kColumns - 1) {
                if (comma == std::string_view::npos)
                    throw std::runtime_error("trace csv: short row on line " +
                                             std::to_string(line_no));
                fields[c] = rest.substr(0, comma);
                rest = rest.substr(comma + 1);
            } else {
                if (comma != std::string_view::npos)
                    throw std::runtime_error("trace csv: extra column on line " +
                                             std::to_string(line_no));
                fields[c] = rest;
            }
        }
        TraceRow r;
        r.t = parse_field(fields[0], line_no);
        r.freq_dev = parse_field(fields[1], line_no);
        r.rocof = parse_field(fields[2], line_no);
        r.turbine = parse_field(fields[3], line_no);
        r.governor = parse_field(fields[4], line_no);
        r.secondary = parse_field(fields[5], line_no);
        r.wind = parse_field(fields[6], line_no);
        r.solar = parse_field(fields[7], line_no);
        r.ess = parse_field(fields[8], line_no);
        r.load = parse_field(fields[9], line_no);
        r.kv = parse_field(fields[10], line_no);
        r.dv = parse_field(fields[11], line_no);
        r.rv = parse_field(fields[12], line_no);
        trace.rows.push_back(r);
    }
    if (trace.rows.size() >= 2) trace.dt = trace.rows[1].t - trace.rows[0].t;
    return trace;
}

void write_trace_csv_file(const std::string& path, const SimTrace& trace) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_trace_csv(os, trace);
    if (!os.flush()) throw std::runtime_error("write to '" + path + "' failed");
}

SimTrace read_trace_csv_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    return read_trace_csv(is);
}

}  // namespace vsgsim
