#include "cavity/feasibility.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cavity/geomphase.hpp"

namespace cavity {

void HardwarePreset::validate() const {
    if (!(g_phys > 0.0)) throw std::invalid_argument("preset coupling must be positive");
    if (!(J_phys >= 0.0)) throw std::invalid_argument("preset tunneling must be non-negative");
    if (!(T_cavity > 0.0) || !(T_qubit > 0.0)) throw std::invalid_argument("preset coherence times must be positive");
    if (Omega && !(*Omega > 0.0)) throw std::invalid_argument("preset drive amplitude must be positive");
}

HardwarePreset preset_cpb() {
    return {"cpb", 2.0 * std::numbers::pi * 50e6, 1e8, 20e-6, 1e-6, std::nullopt};
}

HardwarePreset preset_qdot() {
    return {"qdot", 2.0 * std::numbers::pi * 125e6, 1e8, 50e-6, 1e-6, std::nullopt};
}

// Effective Raman coupling g''' and the toroid tunneling rate.
HardwarePreset preset_toroid() {
    return {"toroid", 1e8, 1.6e6, 25e-6, 6e-6, std::nullopt};
}

HardwarePreset preset_by_name(std::string_view name) {
    if (name == "cpb") return preset_cpb();
    if (name == "qdot") return preset_qdot();
    if (name == "toroid") return preset_toroid();
    throw std::invalid_argument("unknown preset '" + std::string(name) + "' (expected cpb, qdot or toroid)");
}

std::vector<std::string> preset_names() { return {"cpb", "qdot", "toroid"}; }

FeasibilityReport feasibility_report(const HardwarePreset& preset, const LatticeConfig& config) {
    preset.validate();
    LatticeConfig scaled = config;
    scaled.coupling = 1.0;
    scaled.tunneling = preset.J_phys / preset.g_phys;

    FeasibilityReport report;
    report.preset = preset.name;
    report.tunneling_over_g = scaled.tunneling;
    report.g_tau = solve_gate_time(scaled);
    report.loop_time = report.g_tau / preset.g_phys;
    report.preparation_time = 2.0 * report.loop_time;
    report.ratio_cavity = report.preparation_time / preset.T_cavity;
    report.ratio_qubit = report.preparation_time / preset.T_qubit;
    if (preset.Omega) {
        report.drive_ratio = 2.0 * *preset.Omega / preset.g_phys;
        report.strong_driving_ok = *report.drive_ratio >= 10.0;
    }
    return report;
}

}  // namespace cavity
