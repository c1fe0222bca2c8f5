#include "cavity/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cavity {

void LatticeConfig::validate() const {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("lattice dimensions must be positive, got " +
                                    std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (!std::isfinite(coupling) || !std::isfinite(tunneling) || !std::isfinite(detuning)) {
        throw std::invalid_argument("lattice parameters must be finite");
    }
    if (coupling < 0.0) throw std::invalid_argument("coupling g must be non-negative");
    if (tunneling < 0.0) throw std::invalid_argument("tunneling J must be non-negative");
}

namespace {

Mode make_mode(const LatticeConfig& config, int l, int k) {
    Mode mode;
    mode.l = l;
    mode.k = k;
    mode.L = 2.0 * std::numbers::pi * l / config.rows;
    mode.K = 2.0 * std::numbers::pi * k / config.cols;
    mode.omega = config.detuning + 2.0 * config.tunneling * std::cos(mode.L) +
                 2.0 * config.tunneling * std::cos(mode.K);
    return mode;
}

}  // namespace

double mode_frequency(const LatticeConfig& config, int l, int k) {
    config.validate();
    if (l < 0 || l >= config.rows || k < 0 || k >= config.cols) {
        throw std::domain_error("mode index (" + std::to_string(l) + ", " + std::to_string(k) +
                                ") out of range");
    }
    return make_mode(config, l, k).omega;
}

std::vector<Mode> enumerate_modes(const LatticeConfig& config) {
    config.validate();
    std::vector<Mode> modes;
    modes.reserve(static_cast<std::size_t>(config.sites()));
    for (int l = 0; l < config.rows; ++l) {
        for (int k = 0; k < config.cols; ++k) modes.push_back(make_mode(config, l, k));
    }
    return modes;
}

double min_abs_frequency(const LatticeConfig& config) {
    double best = INFINITY;
    for (const Mode& mode : enumerate_modes(config)) best = std::min(best, std::abs(mode.omega));
    return best;
}

}  // namespace cavity
