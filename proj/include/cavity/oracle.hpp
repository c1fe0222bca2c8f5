#pragma once
// Brute-force propagation of the qubit-cavity interaction Hamiltonian on a
// truncated Fock space, used to cross-check the analytic phase formulas.

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "cavity/geomphase.hpp"
#include "cavity/kernels.hpp"
#include "cavity/lattice.hpp"

namespace cavity {

/// Largest joint dimension handled by the matrix-free integrator.
inline constexpr std::size_t kMaxFockDimension = 200000;
/// Largest dimension for which dense matrices (H, full U) are built.
inline constexpr std::size_t kMaxDenseDimension = 4096;

struct OracleSettings {
    int n_max = 4;
    double tolerance = 1e-10;     // Richardson estimate and unitarity defect
    int initial_steps = 16;       // RK4 steps per block before halving
    int max_steps = 1 << 15;      // per block
    bool reset_time_origin = true;  // false: second echo block runs on [tau, 2 tau] (experimental)
    Execution exec = Execution::parallel;
};

class IntegratorNonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidExtraction : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Joint state of the qubits and the truncated photon modes, in the layout
/// of kernels::FockLayout (mode-basis field, one mode per Fourier mode).
class FockRegister {
public:
    /// Field in the joint vacuum, qubits in `qubit_state` (length 2^(MN)).
    FockRegister(const LatticeConfig& config, int n_max, const std::vector<cplx>& qubit_state);

    const kernels::FockLayout& layout() const { return layout_; }
    const LatticeConfig& config() const { return config_; }
    std::vector<cplx>& amplitudes() { return amps_; }
    const std::vector<cplx>& amplitudes() const { return amps_; }

    /// Probability of finding any photon.
    double excitation() const;
    /// Mean photon number of mode q.
    double mean_photons(int mode) const;

private:
    LatticeConfig config_;
    kernels::FockLayout layout_;
    std::vector<cplx> amps_;
};

/// Dense H(t) = (1/sqrt(MN)) sum_sites X_s sum_modes
/// [g e^{-i(omega t + L m + K n)} a + h.c.]. Throws std::invalid_argument
/// beyond kMaxDenseDimension.
Eigen::MatrixXcd build_hamiltonian(const LatticeConfig& config, double t, int n_max);

struct Propagation {
    Eigen::MatrixXcd columns;     // propagated input columns
    int steps = 0;                // RK4 steps of the accepted run (per block)
    double error_estimate = 0.0;  // max |U_2n - U_n| / 15
    double unitarity_defect = 0.0;
};

/// Time-ordered propagator over [0, tau] (full matrix; kMaxDenseDimension
/// cap). Throws IntegratorNonConvergence if the step budget runs out.
Propagation evolve(const LatticeConfig& config, double tau, const OracleSettings& settings = {});

/// Propagates a register in place over [t0, t0 + tau]; returns the step
/// count and error estimate.
Propagation evolve_state(FockRegister& reg, double t0, double tau, const OracleSettings& settings = {});

struct EvolutionReport {
    int rows = 1;
    int cols = 1;
    double tau = 0.0;
    /// <vac, b'| S_z U S_z U |vac, b> over qubit basis states.
    Eigen::MatrixXcd vacuum_block;
    /// Largest eigenvalue of I - B^dag B: worst-case population left in the
    /// field over all qubit inputs.
    double residual_excitation = 0.0;
    int steps = 0;
    double error_estimate = 0.0;
    double unitarity_defect = 0.0;
};

/// S_z U(tau) S_z U(tau) applied to every vacuum-field input.
EvolutionReport echo_evolve(const LatticeConfig& config, double tau, const OracleSettings& settings = {});

/// (phi(++) + phi(--) - phi(+-) - phi(-+)) / 4 in the sigma^x eigenbasis of
/// sites a and b, others in |+x>. Throws InvalidExtraction when the residual
/// excitation exceeds 1e-6.
double extract_pair_phase(const EvolutionReport& report, int site_a, int site_b);

/// exp(i sum_modes 2 gamma_mode J_X^dag J_X) as a dense qubit matrix.
Eigen::MatrixXcd analytic_echo_unitary(const LatticeConfig& config, double tau);

/// J_X for mode (L, K): sum_sites X_s e^{i(L m + K n)}, dense.
Eigen::MatrixXcd collective_operator(const LatticeConfig& config, const Mode& mode);
/// prod_sites Z_s, optionally leaving one site out.
Eigen::MatrixXcd total_sz(int qubits, std::optional<int> skipped_site = std::nullopt);

struct IdentityReport {
    double commutator_sz_jdagj = 0.0;  // max entry of [S_z, J^dag J]
    double anticommutator_sz_j = 0.0;  // {S_z, J}
    double anticommutator_sz_jdag = 0.0;
    double mutual_commutator = 0.0;    // [J_q, J_q'] and [J_q, J_q'^dag]
    bool holds(double tol = 1e-14) const;
};

/// Checks the S_z / J_X algebra on an M x N array (MN <= 4). With
/// `skipped_site` the S_z used is corrupted by leaving that site out.
IdentityReport check_identities(int rows, int cols, std::optional<int> skipped_site = std::nullopt);

}  // namespace cavity
