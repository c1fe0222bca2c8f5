#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cavity/geomphase.hpp"
#include "cavity/lattice.hpp"

namespace cavity::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evenly spaced grid min, min + step, ..., up to max (inclusive within
/// 1e-9 step). Empty when max < min.
struct Grid {
    double min = 0.0;
    double max = 0.0;
    double step = 1.0;
    std::vector<double> values() const;
};

struct RunConfig {
    LatticeConfig lattice{19, 19, 1.0, 0.1, 0.0};
    std::uint64_t seed = 0;
    std::optional<std::string> preset;
    std::string out_dir = ".";

    // [gamma-sweep]
    double sweep_tau = 3.0;
    Grid delta_grid{0.0, 30.0, 0.5};
    Grid tau_grid{0.0, 3.0, 0.01};
    std::vector<Separation> separations{{1, 0}, {1, 1}, {2, 0}, {1, 2}, {2, 2}, {0, 3}};

    // [cluster]
    std::optional<double> cluster_tau;  // unset: solve 4 Gamma_nn = pi
    bool nn_only = true;
    bool periodic = true;
    bool snapshot = true;

    // [oracle]
    int n_max = 4;
    double tolerance = 1e-10;
    double oracle_tau = 0.2;
    std::optional<int> compare_n_max;
    bool self_test = false;
    bool reset_time_origin = true;
    double phase_tolerance = 1e-6;
    double residual_tolerance = 1e-8;
    double drift_tolerance = 1e-7;

    // [mbqc]
    std::string pattern;
    std::string source = "both";  // reference | generated | both
    std::string expect = "none";  // none | identity | clifford | cnot

    /// key = value lines of the resolved configuration, section-qualified.
    std::vector<std::pair<std::string, std::string>> resolved() const;
};

/// Parses INI text. Sections: [lattice], [run], [gamma-sweep], [cluster],
/// [oracle], [mbqc]. Throws ConfigError naming the line for unknown sections
/// or keys and for malformed values.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

}  // namespace cavity::cli
