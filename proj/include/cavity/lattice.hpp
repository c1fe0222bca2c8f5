#pragma once

#include <vector>

namespace cavity {

/// Physical parameters of an M x N array of coupled cavities, one qubit per
/// cavity. Frequencies are in units of a reference frequency; by convention
/// the qubit-cavity coupling g is that reference (g = 1).
///
/// Boundaries are periodic: the photon modes are the Fourier modes of the
/// array, so site (m, n) is identified with (m + M, n) and (m, n + N).
struct LatticeConfig {
    int rows = 1;            // M
    int cols = 1;            // N
    double coupling = 1.0;   // g
    double tunneling = 0.0;  // J
    double detuning = 0.0;   // delta

    /// Throws std::invalid_argument on non-positive dimensions, negative g
    /// or J, or non-finite values. g = 0 is accepted (decoupled array).
    void validate() const;

    int sites() const { return rows * cols; }
};

/// One photon Bloch mode of the array.
struct Mode {
    int l = 0;
    int k = 0;
    double L = 0.0;      // 2 pi l / M
    double K = 0.0;      // 2 pi k / N
    double omega = 0.0;  // delta + 2J cos L + 2J cos K
};

/// delta + 2J (cos(2 pi l/M) + cos(2 pi k/N)). Throws std::domain_error if
/// (l, k) is outside [0, M) x [0, N).
double mode_frequency(const LatticeConfig& config, int l, int k);

/// All M*N modes in row-major (l, k) order.
std::vector<Mode> enumerate_modes(const LatticeConfig& config);

/// min over modes of |omega|. Zero means the array has an exact zero mode
/// (e.g. even M or N at delta = 0).
double min_abs_frequency(const LatticeConfig& config);

}  // namespace cavity
