#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "support.hpp"
#include "vsgsim/trace.hpp"

using namespace vsgsim;
using testsupport::Rng;

namespace {

TraceRow random_row(Rng& rng) {
    TraceRow r;
    r.t = rng.uniform(0.0, 100.0);
    r.freq_dev = rng.uniform(-1.0, 1.0);
    r.rocof = rng.uniform(-5.0, 5.0);
    r.turbine = rng.uniform(-0.5, 0.5);
    r.governor = rng.uniform(-0.5, 0.5);
    r.secondary = rng.uniform(-0.5, 0.5);
    r.wind = rng.uniform(0.0, 0.3);
    r.solar = rng.uniform(0.0, 0.2);
    r.ess = rng.uniform(-0.29, 0.29);
    r.load = rng.uniform(0.0, 0.4);
    r.kv = rng.uniform(0.5, 7.0);
    r.dv = rng.uniform(0.1, 10.0);
    r.rv = rng.uniform(0.005, 2.7);
    return r;
}

}  // namespace

TEST_SUITE("trace") {

TEST_CASE("format_double survives a strtod round trip") {
    Rng rng(0x7ace5);
    for (int i = 0; i < 20000; ++i) {
        double v;
        switch (i % 4) {
            case 0: v = rng.uniform(-1.0, 1.0); break;
            case 1: v = rng.uniform(-1e-9, 1e-9); break;
            case 2: v = rng.uniform(-1e9, 1e9); break;
            default: v = std::ldexp(rng.uniform(-1.0, 1.0), int(rng.below(600)) - 300);
        }
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-0.5) == "-0.5");
    // Shortest form, not 17 significant digits of noise.
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(0.30000000000000004).find("0.30000000000000004") == 0);
}

TEST_CASE("trace CSV header is the stable external contract") {
    SimTrace tr;
    tr.rows.push_back(TraceRow{});
    std::ostringstream os;
    write_trace_csv(os, tr);
    const std::string text = os.str();
    const std::string header = text.substr(0, text.find('\n'));
    CHECK(header == "t,delta_f,rocof,dp_m,dp_g,dp_c,dp_w,dp_pv,dp_vi,dp_l,kv,dv,rv");
}

TEST_CASE("trace CSV: bitwise value round trip") {
    Rng rng(99);
    SimTrace tr;
    tr.dt = 0.01;
    for (int i = 0; i < 500; ++i) tr.rows.push_back(random_row(rng));

    std::ostringstream os;
    write_trace_csv(os, tr);
    std::istringstream is(os.str());
    const SimTrace back = read_trace_csv(is);

    REQUIRE(back.rows.size() == tr.rows.size());
    for (std::size_t i = 0; i < tr.rows.size(); ++i) {
        const TraceRow& a = tr.rows[i];
        const TraceRow& b = back.rows[i];
        CHECK(a.t == b.t);
        CHECK(a.freq_dev == b.freq_dev);
        CHECK(a.rocof == b.rocof);
        CHECK(a.turbine == b.turbine);
        CHECK(a.governor == b.governor);
        CHECK(a.secondary == b.secondary);
        CHECK(a.wind == b.wind);
        CHECK(a.solar == b.solar);
        CHECK(a.ess == b.ess);
        CHECK(a.load == b.load);
        CHECK(a.kv == b.kv);
        CHECK(a.dv == b.dv);
        CHECK(a.rv == b.rv);
    }
    // Re-serializing reproduces the exact bytes.
    std::ostringstream os2;
    write_trace_csv(os2, back);
    CHECK(os2.str() == os.str());
}

TEST_CASE("trace CSV reader rejects malformed input") {
    {
        std::istringstream is("not,a,trace\n1,2,3\n");
        CHECK_THROWS_AS(read_trace_csv(is), std::runtime_error);
    }
    {
        // Right header, short row.
        std::istringstream is(
            "t,delta_f,rocof,dp_m,dp_g,dp_c,dp_w,dp_pv,dp_vi,dp_l,kv,dv,rv\n"
            "0,0,0\n");
        CHECK_THROWS_AS(read_trace_csv(is), std::runtime_error);
    }
    {
        // Non-numeric cell.
        std::istringstream is(
            "t,delta_f,rocof,dp_m,dp_g,dp_c,dp_w,dp_pv,dp_vi,dp_l,kv,dv,rv\n"
            "0,zero,0,0,0,0,0,0,0,0,1,1,1\n");
        CHECK_THROWS_AS(read_trace_csv(is), std::runtime_error);
    }
}

TEST_CASE("empty trace still writes a header and reads back empty") {
    SimTrace tr;
    std::ostringstream os;
    write_trace_csv(os, tr);
    std::istringstream is(os.str());
    const SimTrace back = read_trace_csv(is);
    CHECK(back.rows.empty());
    CHECK(tr.duration() == 0.0);
}

TEST_CASE("duration reports the last timestamp") {
    SimTrace tr;
    TraceRow r;
    r.t = 3.25;
    tr.rows.push_back(r);
    r.t = 7.5;
    tr.rows.push_back(r);
    CHECK(tr.duration() == 7.5);
}

}  // TEST_SUITE
