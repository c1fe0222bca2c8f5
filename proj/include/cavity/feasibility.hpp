#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cavity/lattice.hpp"

namespace cavity {

/// Physical parameter set of a candidate hardware platform. Rates are
/// angular frequencies (rad/s), times are seconds.
struct HardwarePreset {
    std::string name;
    double g_phys = 0.0;
    double J_phys = 0.0;
    double T_cavity = 0.0;
    double T_qubit = 0.0;
    std::optional<double> Omega;  // classical drive Rabi frequency

    void validate() const;
};

/// Circuit-QED Cooper-pair box, double quantum dot, and Raman-coupled atom in
/// a toroidal microcavity.
HardwarePreset preset_cpb();
HardwarePreset preset_qdot();
HardwarePreset preset_toroid();
/// Lookup by short name: "cpb", "qdot", "toroid". Throws std::invalid_argument.
HardwarePreset preset_by_name(std::string_view name);
std::vector<std::string> preset_names();

struct FeasibilityReport {
    std::string preset;
    double tunneling_over_g = 0.0;
    double g_tau = 0.0;             // dimensionless gate time for one loop
    double loop_time = 0.0;         // tau* in seconds
    double preparation_time = 0.0;  // 2 tau*: both loops of the echo sequence
    double ratio_cavity = 0.0;      // preparation_time / T_cavity
    double ratio_qubit = 0.0;       // preparation_time / T_qubit
    std::optional<double> drive_ratio;      // 2 Omega / g
    std::optional<bool> strong_driving_ok;  // drive_ratio >= 10
};

/// Solves the gate time for `config` with its tunneling replaced by
/// J_phys / g_phys and converts to physical units. Array size and detuning
/// come from `config`. Propagates GateTimeNotFound.
FeasibilityReport feasibility_report(const HardwarePreset& preset, const LatticeConfig& config);

}  // namespace cavity
