#include "vsgsim/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vsgsim {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("fuzzy config: ") + what);
}

}  // namespace

FuzzyConfig FuzzyConfig::defaults() {
    FuzzyConfig cfg;
    cfg.inertia_anchors = {0.5, 2.125, 3.75, 5.375, 7.0};
    cfg.damping_anchors = {0.1, 5.05, 10.0};
    cfg.droop_anchors = {0.005, 0.67875, 1.3525, 2.02625, 2.7};
    // Rows: renewable share L/M/H. Columns: frequency deviation VN..VP.
    cfg.inertia_rules = {{
        {{0, 0, 0, 0, 2}},
        {{1, 1, 2, 3, 3}},
        {{2, 2, 2, 4, 4}},
    }};
    cfg.droop_rules = {{
        {{0, 1, 2, 1, 0}},
        {{0, 1, 2, 1, 0}},
        {{0, 1, 2, 1, 0}},
    }};
    // Damping has the three-label set {S, M, H}, so its cells index a
    // three-anchor array.
    cfg.damping_rules = {{
        {{0, 0, 0, 0, 1}},
        {{0, 0, 1, 2, 2}},
        {{1, 1, 1, 2, 2}},
    }};
    return cfg;
}

void FuzzyConfig::validate() const {
    require(freq_min < freq_max, "frequency universe must be non-degenerate");
    require(res_min < res_max, "renewable-power universe must be non-degenerate");
    auto ordered = [](std::span<const double> a) {
        for (std::size_t i = 1; i < a.size(); ++i)
            if (!(a[i - 1] < a[i])) return false;
        return true;
    };
    require(ordered(inertia_anchors), "inertia anchors must be increasing");
    require(ordered(damping_anchors), "damping anchors must be increasing");
    require(ordered(droop_anchors), "droop anchors must be increasing");
    auto in_range = [](const RuleTable& t, std::size_t n) {
        for (const auto& row : t)
            for (auto v : row)
                if (v >= n) return false;
        return true;
    };
    require(in_range(inertia_rules, inertia_anchors.size()), "inertia rule out of range");
    require(in_range(damping_rules, damping_anchors.size()), "damping rule out of range");
    require(in_range(droop_rules, droop_anchors.size()), "droop rule out of range");
}

std::vector<double> fuzzify(double x, double lo, double hi, std::size_t label_count) {
    if (label_count < 2) throw std::invalid_argument("need at least two labels");
    if (!(lo < hi)) throw std::invalid_argument("universe must be non-degenerate");
    std::vector<double> degrees(label_count, 0.0);
    const double step = (hi - lo) / static_cast<double>(label_count - 1);
    const double clamped = std::clamp(x, lo, hi);
    for (std::size_t i = 0; i < label_count; ++i) {
        const double peak = lo + step * static_cast<double>(i);
        const double d = std::abs(clamped - peak);
        if (d < step) degrees[i] = 1.0 - d / step;
    }
    return degrees;
}

double infer_and_defuzzify(std::span<const double> freq_degrees,
                           std::span<const double> res_degrees,
                           const RuleTable& table,
                           std::span<const double> anchors) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t r = 0; r < res_degrees.size(); ++r) {
        for (std::size_t c = 0; c < freq_degrees.size(); ++c) {
            const double w = std::min(res_degrees[r], freq_degrees[c]);
            if (w <= 0.0) continue;
            num += w * anchors[table[r][c]];
            den += w;
        }
    }
    if (den <= 0.0) throw std::logic_error("no rule fired");
    return num / den;
}

VirtualParams fuzzy_adapt(double freq_dev, double res_power, const FuzzyConfig& cfg) {
    const auto fd = fuzzify(freq_dev, cfg.freq_min, cfg.freq_max, 5);
    const auto rd = fuzzify(res_power, cfg.res_min, cfg.res_max, 3);
    VirtualParams vp;
    vp.inertia = infer_and_defuzzify(fd, rd, cfg.inertia_rules, cfg.inertia_anchors);
    vp.damping = infer_and_defuzzify(fd, rd, cfg.damping_rules, cfg.damping_anchors);
    vp.droop = infer_and_defuzzify(fd, rd, cfg.droop_rules, cfg.droop_anchors);
    return clamp_virtual_params(vp);
}

FuzzyController::FuzzyController(FuzzyConfig cfg) : cfg_(cfg) { cfg_.validate(); }

VirtualParams FuzzyController::step(const ControlInput& in) {
    return fuzzy_adapt(in.freq_dev, in.res_power, cfg_);
}

FuzzyInertiaController::FuzzyInertiaController(FuzzyConfig cfg) : cfg_(cfg) {
    cfg_.validate();
}

VirtualParams FuzzyInertiaController::step(const ControlInput& in) {
    const auto fd = fuzzify(in.freq_dev, cfg_.freq_min, cfg_.freq_max, 5);
    const auto rd = fuzzify(in.res_power, cfg_.res_min, cfg_.res_max, 3);
    VirtualParams vp = fixed_virtual_params();
    vp.inertia = infer_and_defuzzify(fd, rd, cfg_.inertia_rules, cfg_.inertia_anchors);
    return clamp_virtual_params(vp);
}

}  // namespace vsgsim
