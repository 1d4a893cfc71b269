#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "vsgsim/controller.hpp"

namespace vsgsim {

inline constexpr int kFnnInputs = 2;       // freq deviation, RoCoF
inline constexpr int kFnnMemberships = 3;  // Gaussians per input
inline constexpr int kFnnRules = 9;        // full membership grid
inline constexpr int kFnnOutputs = 3;      // inertia, damping, droop

// Input scaling applied before layer 1 so the Gaussian geometry sees
// unit-order values.
inline constexpr double kFreqDevScale = 0.5;  // Hz
inline constexpr double kRocofScale = 1.0;    // Hz/s

// Normalized inputs are clamped here so extreme measurements stay on the
// membership grid instead of collapsing every rule toward zero.
inline constexpr double kNormInputClamp = 1.5;

class TrainingDivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FnnOptions {
    double eta_w = 0.2;           // weight learning rate
    double eta_m = 0.02;          // center learning rate
    double eta_sigma = 0.01;      // width learning rate
    double error_gain = 1.0;      // the positive constant combining e and de/dt
    double sigma_min = 0.05;      // width floor
    double tolerance = 1e-3;      // |error| below which training is skipped
    double delta_max = 1.0;       // cap on the strengthening delta; 0 disables
    std::uint64_t init_seed = 0;  // 0 = deterministic neutral init
};

/// Parameters of the four-layer network: Gaussian centers/widths per input
/// membership and the rule-to-output connection weights.
struct FnnState {
    std::array<std::array<double, kFnnMemberships>, kFnnInputs> centers{};
    std::array<std::array<double, kFnnMemberships>, kFnnInputs> widths{};
    std::array<std::array<double, kFnnOutputs>, kFnnRules> weights{};
    FnnOptions opts;
    std::uint64_t iteration = 0;

    static FnnState initial(const FnnOptions& opts = {});
};

/// Intermediate signals of one forward pass.
struct FnnIo {
    std::array<double, kFnnInputs> x{};  // scaled inputs
    std::array<std::array<double, kFnnMemberships>, kFnnInputs> memberships{};
    std::array<double, kFnnRules> rule_out{};
    std::array<double, kFnnOutputs> raw_out{};
    VirtualParams vp;
};

/// Layers 1-4 plus the squashing map onto the parameter ranges.
FnnIo fnn_forward(const FnnState& state, double freq_dev, double rocof);

/// One backpropagation step for the given error signal and its rate; the
/// combined output delta is error_gain*error + error_rate, identical for all
/// output nodes. Widths are floored at sigma_min. Throws
/// TrainingDivergenceError if any parameter leaves the finite range.
void fnn_train_step(FnnState& state, const FnnIo& io, double error, double error_rate);

/// Forward pass plus one training step on e = -freq_dev (de/dt = -rocof),
/// skipped when |e| falls below the tolerance. The teaching signal is aligned
/// with the plant sensitivity: stronger parameters always push |freq_dev|
/// down, so the delta is applied in the direction that grows compensation
/// while the deviation grows and relaxes it while the deviation decays.
/// The combined delta is capped at +delta_max but not below: under a
/// fast oscillation the alternating rate term then relaxes the parameters on
/// balance, which backs the controller out of an unstable corner instead of
/// ratcheting further into it.
///
/// The returned droop is additionally floored so the one-tick loop gain of
/// the sampled inverter/swing loop stays at or below unity for the smallest
/// design inertia; the floor shrinks to nothing as dt decreases, so it only
/// excludes combinations the discretisation could not represent anyway.
VirtualParams fnnc_adapt(FnnState& state, double freq_dev, double rocof, double dt);

/// Text round trip for trained controllers.
void save_fnn(std::ostream& os, const FnnState& state);
void save_fnn_file(const std::string& path, const FnnState& state);
FnnState load_fnn(std::istream& is);
FnnState load_fnn_file(const std::string& path);

class FnnController final : public Controller {
public:
    explicit FnnController(FnnOptions opts = {}, double dt = 0.01);
    explicit FnnController(FnnState state, double dt = 0.01);
    VirtualParams step(const ControlInput& in) override;
    const FnnState& state() const { return state_; }
    FnnState& state() { return state_; }

private:
    FnnState state_;
    double dt_;
};

}  // namespace vsgsim
