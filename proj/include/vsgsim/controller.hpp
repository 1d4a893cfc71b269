#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace vsgsim {

/// Virtual synchronous generator parameter triple produced by a controller
/// each tick: synthetic inertia (p.u.s), damping (p.u.MW/Hz) and droop
/// (Hz/p.u.MW) of the ESS-based inverter.
struct VirtualParams {
    double inertia = 0.0;  // k_v
    double damping = 0.0;  // d_v
    double droop = 1.0;    // r_v
};

// Adaptive-controller parameter ranges (fixed baseline uses values outside
// none of them).
inline constexpr double kInertiaMin = 0.5;
inline constexpr double kInertiaMax = 7.0;
inline constexpr double kDampingMin = 0.1;
inline constexpr double kDampingMax = 10.0;
inline constexpr double kDroopMin = 0.005;
inline constexpr double kDroopMax = 2.7;

/// Factory-tuned constant baseline parameters.
VirtualParams fixed_virtual_params();

/// Midpoint of every adaptive range; the neutral starting point of the
/// online-trained controller.
VirtualParams midrange_virtual_params();

/// Clamp each component into its adaptive range.
VirtualParams clamp_virtual_params(VirtualParams vp);

enum class ControllerKind {
    none,           // ESS channel disabled entirely
    fixed,          // constant baseline parameters
    fuzzy,          // rule-table adaptation of all three parameters
    fuzzy_inertia,  // rule-table adaptation of inertia only
    fnnc,           // online-trained fuzzy neural network
    remote,         // round-trip through the datagram bridge
};

std::string_view to_string(ControllerKind kind);
ControllerKind controller_kind_from_string(std::string_view name);

/// Per-tick measurement set handed to every controller. This exact tuple is
/// what the datagram bridge serializes.
struct ControlInput {
    double t = 0.0;         // s
    double freq_dev = 0.0;  // Hz
    double rocof = 0.0;     // Hz/s, backward difference
    double res_power = 0.0; // total renewable power change, p.u.
};

/// Controller plug-in contract: one VirtualParams per tick.
class Controller {
public:
    virtual ~Controller() = default;
    virtual VirtualParams step(const ControlInput& in) = 0;
    /// False when the ESS channel must stay out of the loop (the no-VSG
    /// baseline).
    virtual bool drives_ess() const { return true; }
};

class NoneController final : public Controller {
public:
    VirtualParams step(const ControlInput&) override { return fixed_virtual_params(); }
    bool drives_ess() const override { return false; }
};

class FixedController final : public Controller {
public:
    explicit FixedController(VirtualParams vp = fixed_virtual_params()) : vp_(vp) {}
    VirtualParams step(const ControlInput&) override { return vp_; }

private:
    VirtualParams vp_;
};

/// Advances the ESS inverter power one tick: the proper transfer function
/// (inertia*s + damping) / ((1 + s*t_ess) * droop) acting on -freq_dev, with
/// the derivative realized as a backward difference and the lag state clamped
/// to +-ess_cap.
double vsg_power_step(double ess_state, double freq_dev, double prev_freq_dev,
                      const VirtualParams& vp, double t_ess, double ess_cap, double dt);

}  // namespace vsgsim
