#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "vsgsim/controller.hpp"

namespace vsgsim {

// Output linguistic labels, in anchor order.
enum class OutLabel : std::uint8_t { VS = 0, S = 1, M = 2, H = 3, VH = 4 };

/// 3 renewable-power rows (L, M, H) by 5 frequency-deviation columns
/// (VN, N, Z, P, VP); each cell is an index into the output anchor set.
using RuleTable = std::array<std::array<std::uint8_t, 5>, 3>;

/// Rule-table controller configuration: input universes, output anchors and
/// the three rule tables. Overridable from the run configuration file.
struct FuzzyConfig {
    double freq_min = -0.5;  // Hz
    double freq_max = 0.5;
    double res_min = 0.0;  // p.u.
    double res_max = 0.1;

    // Singleton output values for {VS, S, M, H, VH}; damping uses only
    // {S, M, H} so its anchor set has three entries.
    std::array<double, 5> inertia_anchors{};
    std::array<double, 3> damping_anchors{};
    std::array<double, 5> droop_anchors{};

    RuleTable inertia_rules{};
    RuleTable damping_rules{};  // cells index damping_anchors
    RuleTable droop_rules{};

    static FuzzyConfig defaults();
    void validate() const;
};

/// Membership degrees of x in a uniform triangular partition with 50%
/// overlap over [lo, hi]; x is clamped to the universe first. At least one
/// degree is always nonzero.
std::vector<double> fuzzify(double x, double lo, double hi, std::size_t label_count);

/// Weighted-average (singleton) defuzzification with min rule strength.
double infer_and_defuzzify(std::span<const double> freq_degrees,
                           std::span<const double> res_degrees,
                           const RuleTable& table,
                           std::span<const double> anchors);

/// Full two-input three-output inference; result is clamped to the adaptive
/// parameter ranges.
VirtualParams fuzzy_adapt(double freq_dev, double res_power, const FuzzyConfig& cfg);

class FuzzyController final : public Controller {
public:
    explicit FuzzyController(FuzzyConfig cfg = FuzzyConfig::defaults());
    VirtualParams step(const ControlInput& in) override;
    const FuzzyConfig& config() const { return cfg_; }

private:
    FuzzyConfig cfg_;
};

/// Adapts the inertia parameter only; damping and droop stay at the fixed
/// baseline values.
class FuzzyInertiaController final : public Controller {
public:
    explicit FuzzyInertiaController(FuzzyConfig cfg = FuzzyConfig::defaults());
    VirtualParams step(const ControlInput& in) override;

private:
    FuzzyConfig cfg_;
};

}  // namespace vsgsim
