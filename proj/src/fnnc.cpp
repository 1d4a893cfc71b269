#include "vsgsim/fnnc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "splitmix.hpp"
#include "vsgsim/trace.hpp"

namespace vsgsim {

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Discrete-loop stability guard for the adapted triple. The inverter lag
// responds to a frequency change within one tick with gain
// (1-exp(-dt/T))*(d_v + k_v/dt)/r_v; closing through the swing stage this must
// stay at or below unity per tick or the sampled loop rings at the Nyquist
// rate even though the continuous model is stable. The floor is computed for
// the smallest plant inertia the controller is designed to meet and vanishes
// as dt -> 0.
constexpr double kDesignEssLagS = 5.0;
constexpr double kDesignMinInertia = 0.05;  // p.u.MW*s
constexpr double kGainCap = 1.0;            // per-tick loop gain bound

// Relaxing updates are only applied this close to nominal frequency; see
// fnnc_adapt.
constexpr double kTrimBandHz = 0.005;

double stable_droop_floor(double inertia_gain, double damping_gain, double dt) {
    const double alpha = 1.0 - std::exp(-dt / kDesignEssLagS);
    const double swing_gain = dt / (2.0 * kDesignMinInertia);
    return alpha * (damping_gain + inertia_gain / dt) * swing_gain / kGainCap;
}

// Which membership of input `i` participates in rule `r`; rules enumerate the
// full grid row-major over (input-0 label, input-1 label).
int rule_label(int r, int i) {
    return i == 0 ? r / kFnnMemberships : r % kFnnMemberships;
}

bool all_finite(const FnnState& st) {
    for (int i = 0; i < kFnnInputs; ++i)
        for (int j = 0; j < kFnnMemberships; ++j)
            if (!std::isfinite(st.centers[i][j]) || !std::isfinite(st.widths[i][j]))
                return false;
    for (int r = 0; r < kFnnRules; ++r)
        for (int o = 0; o < kFnnOutputs; ++o)
            if (!std::isfinite(st.weights[r][o])) return false;
    return true;
}

}  // namespace

FnnState FnnState::initial(const FnnOptions& opts) {
    FnnState st;
    st.opts = opts;
    for (int i = 0; i < kFnnInputs; ++i) {
        st.centers[i] = {-1.0, 0.0, 1.0};
        st.widths[i] = {0.5, 0.5, 0.5};
    }
    if (opts.init_seed != 0) {
        std::uint64_t n = 0;
        auto draw = [&](double lo, double hi) {
            return lo + (hi - lo) * detail::uniform01(detail::mix64(opts.init_seed, n++));
        };
        for (int i = 0; i < kFnnInputs; ++i)
            for (int j = 0; j < kFnnMemberships; ++j) {
                st.centers[i][j] += draw(-0.2, 0.2);
                st.widths[i][j] = draw(0.3, 1.0);
            }
        for (int r = 0; r < kFnnRules; ++r)
            for (int o = 0; o < kFnnOutputs; ++o) st.weights[r][o] = draw(-0.5, 0.5);
    }
    return st;
}

FnnIo fnn_forward(const FnnState& state, double freq_dev, double rocof) {
    FnnIo io;
    io.x = {std::clamp(freq_dev / kFreqDevScale, -kNormInputClamp, kNormInputClamp),
            std::clamp(rocof / kRocofScale, -kNormInputClamp, kNormInputClamp)};
    for (int i = 0; i < kFnnInputs; ++i) {
        for (int j = 0; j < kFnnMemberships; ++j) {
            const double d = io.x[i] - state.centers[i][j];
            const double s = state.widths[i][j];
            io.memberships[i][j] = std::exp(-(d * d) / (s * s));
        }
    }
    for (int a = 0; a < kFnnMemberships; ++a)
        for (int b = 0; b < kFnnMemberships; ++b)
            io.rule_out[a * kFnnMemberships + b] =
                io.memberships[0][a] * io.memberships[1][b];
    for (int o = 0; o < kFnnOutputs; ++o) {
        double sum = 0.0;
        for (int r = 0; r < kFnnRules; ++r) sum += state.weights[r][o] * io.rule_out[r];
        io.raw_out[o] = sum;
    }
    // Squash onto [0,1], then map affinely into each parameter range. Droop is
    // inverted so that a larger raw output always means a stronger inverter
    // response on all three channels.
    io.vp.inertia = kInertiaMin + (kInertiaMax - kInertiaMin) * logistic(io.raw_out[0]);
    io.vp.damping = kDampingMin + (kDampingMax - kDampingMin) * logistic(io.raw_out[1]);
    io.vp.droop = kDroopMax - (kDroopMax - kDroopMin) * logistic(io.raw_out[2]);
    io.vp = clamp_virtual_params(io.vp);
    return io;
}

void fnn_train_step(FnnState& state, const FnnIo& io, double error, double error_rate) {
    const FnnOptions& opts = state.opts;
    const double delta4 = opts.error_gain * error + error_rate;
    const bool frozen = opts.eta_w == 0.0 && opts.eta_m == 0.0 && opts.eta_sigma == 0.0;
    if (delta4 == 0.0 || frozen) return;

    // Rule-layer deltas use the pre-update weights.
    std::array<double, kFnnRules> delta3{};
    for (int r = 0; r < kFnnRules; ++r) {
        double s = 0.0;
        for (int o = 0; o < kFnnOutputs; ++o) s += delta4 * state.weights[r][o];
        delta3[r] = s;
    }

    FnnState next = state;
    for (int r = 0; r < kFnnRules; ++r)
        for (int o = 0; o < kFnnOutputs; ++o)
            next.weights[r][o] += opts.eta_w * delta4 * io.rule_out[r];

    for (int i = 0; i < kFnnInputs; ++i) {
        for (int j = 0; j < kFnnMemberships; ++j) {
            double acc = 0.0;
            for (int r = 0; r < kFnnRules; ++r)
                if (rule_label(r, i) == j) acc += delta3[r] * io.rule_out[r];
            const double d = io.x[i] - state.centers[i][j];
            const double sg = state.widths[i][j];
            next.centers[i][j] += opts.eta_m * acc * 2.0 * d / (sg * sg);
            next.widths[i][j] += opts.eta_sigma * acc * 2.0 * d * d / (sg * sg * sg);
            next.widths[i][j] = std::max(next.widths[i][j], opts.sigma_min);
        }
    }

    if (!all_finite(next))
        throw TrainingDivergenceError("non-finite network parameter after update");
    next.iteration = state.iteration + 1;
    state = next;
}

VirtualParams fnnc_adapt(FnnState& state, double freq_dev, double rocof, double dt) {
    FnnIo io = fnn_forward(state, freq_dev, rocof);
    // Keep the emitted triple inside the region the sampled loop can actually
    // realise at this step size; without the floor the network walks into
    // combinations whose one-tick loop gain exceeds unity and the inverter
    // output chatters between its saturation limits.
    io.vp.droop = std::clamp(
        std::max(io.vp.droop, stable_droop_floor(io.vp.inertia, io.vp.damping, dt)),
        kDroopMin, kDroopMax);
    const double e = -freq_dev;
    if (std::abs(e) >= state.opts.tolerance) {
        // Train on the deviation magnitude: a larger raw output always means
        // stronger compensation, so this pushes the parameters up while the
        // deviation grows and relaxes them while it decays faster than
        // error_gain would demand. The strengthening delta is capped; the
        // relaxing delta is not (see the header note on oscillation).
        const double sign = e < 0.0 ? -1.0 : 1.0;
        double rate = sign * -rocof;
        // Relaxation is a trim for quasi-steady operation. A fast recovery
        // sweeps through the same membership cells a later disturbance of the
        // opposite sign hits first, so weakening them mid-transient would
        // erase exactly the response that event needs.
        if (std::abs(e) > kTrimBandHz && rate < 0.0) rate = 0.0;
        if (state.opts.delta_max > 0)
            rate = std::min(rate,
                            state.opts.delta_max - state.opts.error_gain * std::abs(e));
        fnn_train_step(state, io, std::abs(e), rate);
    }
    return io.vp;
}

void save_fnn(std::ostream& os, const FnnState& state) {
    const FnnOptions& o = state.opts;
    os << "vsg-fnn 1\n";
    os << "opts " << format_double(o.eta_w) << ' ' << format_double(o.eta_m) << ' '
       << format_double(o.eta_sigma) << ' ' << format_double(o.error_gain) << ' '
       << format_double(o.sigma_min) << ' ' << format_double(o.tolerance) << ' '
       << format_double(o.delta_max) << ' ' << o.init_seed << '\n';
    os << "iteration " << state.iteration << '\n';
    for (int i = 0; i < kFnnInputs; ++i) {
        os << "centers";
        for (double v : state.centers[i]) os << ' ' << format_double(v);
        os << '\n';
    }
    for (int i = 0; i < kFnnInputs; ++i) {
        os << "widths";
        for (double v : state.widths[i]) os << ' ' << format_double(v);
        os << '\n';
    }
    for (int r = 0; r < kFnnRules; ++r) {
        os << "weights";
        for (double v : state.weights[r]) os << ' ' << format_double(v);
        os << '\n';
    }
}

FnnState load_fnn(std::istream& is) {
    auto fail = [](const char* what) {
        throw std::runtime_error(std::string("fnn state file: ") + what);
    };
    std::string tag;
    int version = 0;
    if (!(is >> tag >> version) || tag != "vsg-fnn" || version != 1)
        fail("unrecognized header");
    FnnState st;
    FnnOptions& o = st.opts;
    if (!(is >> tag >> o.eta_w >> o.eta_m >> o.eta_sigma >> o.error_gain >> o.sigma_min >>
          o.tolerance >> o.delta_max >> o.init_seed) ||
        tag != "opts")
        fail("bad options line");
    if (!(is >> tag >> st.iteration) || tag != "iteration") fail("bad iteration line");
    for (int i = 0; i < kFnnInputs; ++i) {
        if (!(is >> tag) || tag != "centers") fail("bad centers line");
        for (double& v : st.centers[i])
            if (!(is >> v)) fail("bad centers line");
    }
    for (int i = 0; i < kFnnInputs; ++i) {
        if (!(is >> tag) || tag != "widths") fail("bad widths line");
        for (double& v : st.widths[i])
            if (!(is >> v)) fail("bad widths line");
    }
    for (int r = 0; r < kFnnRules; ++r) {
        if (!(is >> tag) || tag != "weights") fail("bad weights line");
        for (double& v : st.weights[r])
            if (!(is >> v)) fail("bad weights line");
    }
    if (!all_finite(st)) fail("non-finite parameter");
    return st;
}

void save_fnn_file(const std::string& path, const FnnState& state) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    save_fnn(os, state);
    if (!os.flush()) throw std::runtime_error("write to '" + path + "' failed");
}

FnnState load_fnn_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    return load_fnn(is);
}

FnnController::FnnController(FnnOptions opts, double dt)
    : state_(FnnState::initial(opts)), dt_(dt) {}

FnnController::FnnController(FnnState state, double dt)
    : state_(std::move(state)), dt_(dt) {}

VirtualParams FnnController::step(const ControlInput& in) {
    return fnnc_adapt(state_, in.freq_dev, in.rocof, dt_);
}

}  // namespace vsgsim
