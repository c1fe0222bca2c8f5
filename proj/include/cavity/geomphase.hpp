#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "cavity/lattice.hpp"

namespace cavity {

using cplx = std::complex<double>;

/// Selects the serial reference loops or the OpenMP kernels. Both produce
/// identical rows; the choice only affects wall time.
enum class Execution { serial, parallel };

struct Separation {
    int dm = 0;
    int dn = 0;
    friend bool operator==(const Separation&, const Separation&) = default;
};

/// Displacement amplitude of mode (L, K) per unit J_X eigenvalue after time
/// tau: g / (sqrt(MN) omega) (1 - e^{i omega tau}). Finite at omega = 0,
/// where it tends to -i g tau / sqrt(MN).
cplx beta(const LatticeConfig& config, const Mode& mode, double tau);

/// Geometric phase per unit J_X^dag J_X picked up by mode (L, K) during one
/// displacement loop of duration tau:
///     g^2 / (MN omega) [tau - sin(omega tau) / omega].
/// This is the phase of the exact propagator of the driven-mode Hamiltonian
/// (second Magnus term); a series is used for |omega tau| < 0.1.
double gamma_mode(const LatticeConfig& config, const Mode& mode, double tau);

/// Sum of gamma_mode over all modes (compensated summation).
double gamma_total(const LatticeConfig& config, double tau);

/// Coefficient Gamma of sigma^x sigma^x between two sites separated by
/// (dm, dn) after the echoed sequence of two loops:
///     Gamma = sum_modes 4 gamma_mode cos(L dm + K dn).
/// Separations are taken modulo the lattice; throws std::domain_error for a
/// separation congruent to (0, 0).
double pairwise_phase(const LatticeConfig& config, double tau, int dm, int dn);

/// Gamma for every separation of an M x N lattice at one interaction time.
class PhaseShiftTable {
public:
    struct Entry {
        Separation separation;
        double gamma = 0.0;
    };

    /// `values` is indexed by (dm mod M) * N + (dn mod N).
    PhaseShiftTable(LatticeConfig config, double tau, std::vector<double> values, bool has_zero_modes);

    /// Synthetic table with Gamma = gamma_nn for the four nearest-neighbour
    /// separations and zero elsewhere (tau reported as 0).
    static PhaseShiftTable nearest_neighbor(int rows, int cols, double gamma_nn);

    const LatticeConfig& config() const { return config_; }
    int rows() const { return config_.rows; }
    int cols() const { return config_.cols; }
    double tau() const { return tau_; }
    /// Set when some mode has omega == 0 and its contribution came from the
    /// continuity limit.
    bool has_zero_modes() const { return has_zero_modes_; }

    /// Gamma at any integer separation (reduced modulo the lattice).
    double at(int dm, int dn) const;

    /// One entry per residue class, with -M/2 < dm <= M/2 and
    /// -N/2 < dn <= N/2, excluding (0, 0). Row-major in (dm, dn).
    std::vector<Entry> canonical_entries() const;

    /// Largest |Gamma| over separations with |dm| + |dn| >= 2 (canonical range).
    double max_beyond_nearest() const;

private:
    LatticeConfig config_;
    double tau_ = 0.0;
    std::vector<double> values_;
    bool has_zero_modes_ = false;
};

PhaseShiftTable build_phase_table(const LatticeConfig& config, double tau,
                                  Execution exec = Execution::parallel);

/// Thrown when no gate time exists in the search window.
class GateTimeNotFound : public std::runtime_error {
public:
    GateTimeNotFound(double target, double max_achieved);
    double target() const { return target_; }
    double max_achieved() const { return max_achieved_; }

private:
    double target_;
    double max_achieved_;
};

struct GateTimeSearch {
    double window = 20.0;     // search (0, window] in units of 1/g
    double grid_step = 0.01;  // coarse scan
    double rel_tol = 1e-10;   // bisection stop
};

/// Smallest tau in (0, window] with pairwise_phase(tau, sep) = target, by a
/// grid scan followed by bisection. Requires target > 0.
double solve_gate_time(const LatticeConfig& config, double target = std::numbers::pi / 4,
                       Separation separation = {1, 0}, const GateTimeSearch& search = {});

struct DeltaSweepRow {
    double delta = 0.0;
    double gamma_nn = 0.0;
};

/// Gamma(1, 0) at fixed tau over a grid of detunings (config.detuning is
/// replaced by each grid value). Rows come back in grid order.
std::vector<DeltaSweepRow> sweep_delta(const LatticeConfig& config, double tau, const std::vector<double>& delta_grid,
                                       Execution exec = Execution::parallel);

struct TauSweepRow {
    double tau = 0.0;
    std::vector<double> gamma;  // one per requested separation
};

std::vector<TauSweepRow> sweep_tau(const LatticeConfig& config, const std::vector<double>& tau_grid,
                                   const std::vector<Separation>& separations,
                                   Execution exec = Execution::parallel);

}  // namespace cavity
