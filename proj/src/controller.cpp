#include "vsgsim/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vsgsim {

VirtualParams fixed_virtual_params() { return VirtualParams{1.3, 1.2, 2.7}; }

VirtualParams midrange_virtual_params() {
    return VirtualParams{
        0.5 * (kInertiaMin + kInertiaMax),
        0.5 * (kDampingMin + kDampingMax),
        0.5 * (kDroopMin + kDroopMax),
    };
}

VirtualParams clamp_virtual_params(VirtualParams vp) {
    vp.inertia = std::clamp(vp.inertia, kInertiaMin, kInertiaMax);
    vp.damping = std::clamp(vp.damping, kDampingMin, kDampingMax);
    vp.droop = std::clamp(vp.droop, kDroopMin, kDroopMax);
    return vp;
}

std::string_view to_string(ControllerKind kind) {
    switch (kind) {
        case ControllerKind::none: return "none";
        case ControllerKind::fixed: return "fixed";
        case ControllerKind::fuzzy: return "fuzzy";
        case ControllerKind::fuzzy_inertia: return "fuzzy-inertia";
        case ControllerKind::fnnc: return "fnnc";
        case ControllerKind::remote: return "remote";
    }
    throw std::logic_error("unknown controller kind");
}

ControllerKind controller_kind_from_string(std::string_view name) {
    if (name == "none") return ControllerKind::none;
    if (name == "fixed") return ControllerKind::fixed;
    if (name == "fuzzy") return ControllerKind::fuzzy;
    if (name == "fuzzy-inertia") return ControllerKind::fuzzy_inertia;
    if (name == "fnnc") return ControllerKind::fnnc;
    if (name == "remote") return ControllerKind::remote;
    throw std::invalid_argument("unknown controller kind '" + std::string(name) + "'");
}

double vsg_power_step(double ess_state, double freq_dev, double prev_freq_dev,
                      const VirtualParams& vp, double t_ess, double ess_cap, double dt) {
    if (!(vp.droop > 0)) throw std::invalid_argument("droop must be positive");
    if (!(t_ess > 0) || !(dt > 0)) throw std::invalid_argument("t_ess and dt must be positive");
    const double d_dt = (freq_dev - prev_freq_dev) / dt;
    const double drive = -(vp.damping * freq_dev + vp.inertia * d_dt) / vp.droop;
    const double alpha = 1.0 - std::exp(-dt / t_ess);
    const double next = ess_state + (drive - ess_state) * alpha;
    return std::clamp(next, -ess_cap, ess_cap);
}

}  // namespace vsgsim
