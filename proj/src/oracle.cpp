#include "cavity/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace cavity {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_fock_dimension(const kernels::FockLayout& layout) {
    if (layout.dim > kMaxFockDimension) {
        throw std::invalid_argument("Fock space dimension " + std::to_string(layout.dim) + " exceeds the cap of " +
                                    std::to_string(kMaxFockDimension));
    }
}

kernels::FockLayout make_layout(const LatticeConfig& config, int n_max) {
    config.validate();
    if (n_max < 1) throw std::invalid_argument("photon truncation n_max must be >= 1");
    if (config.sites() > 4) throw std::invalid_argument("the oracle handles at most 4 sites");
    kernels::FockLayout layout(config.sites(), config.sites(), n_max);
    check_fock_dimension(layout);
    return layout;
}

// Drive coefficients of the interaction picture Hamiltonian at time t.
class Drive {
public:
    explicit Drive(const LatticeConfig& config) : modes_(enumerate_modes(config)), qubits_(config.sites()) {
        const double c = config.coupling / std::sqrt(static_cast<double>(qubits_));
        amplitude_ = c;
        for (const Mode& mode : modes_) {
            for (int s = 0; s < qubits_; ++s) {
                const int m = s / config.cols;
                const int n = s % config.cols;
                site_phase_.push_back(mode.L * m + mode.K * n);
            }
        }
        lower_.resize(site_phase_.size());
        raise_.resize(site_phase_.size());
    }

    void at(double t) {
        for (std::size_t q = 0; q < modes_.size(); ++q) {
            for (int s = 0; s < qubits_; ++s) {
                const std::size_t i = q * static_cast<std::size_t>(qubits_) + static_cast<std::size_t>(s);
                lower_[i] = std::polar(amplitude_, -(modes_[q].omega * t + site_phase_[i]));
                raise_[i] = std::conj(lower_[i]);
            }
        }
    }

    const std::vector<cplx>& lower() const { return lower_; }
    const std::vector<cplx>& raise() const { return raise_; }

private:
    std::vector<Mode> modes_;
    int qubits_;
    double amplitude_ = 0.0;
    std::vector<double> site_phase_;
    std::vector<cplx> lower_;
    std::vector<cplx> raise_;
};

// Row-major block of column vectors propagated by classical RK4.
class Integrator {
public:
    Integrator(const LatticeConfig& config, const kernels::FockLayout& layout, std::size_t columns, Execution exec)
        : drive_(config), layout_(layout), columns_(columns), exec_(exec) {
        const std::size_t n = layout.dim * columns;
        k1_.resize(n);
        k2_.resize(n);
        k3_.resize(n);
        k4_.resize(n);
        tmp_.resize(n);
    }

    void run(std::vector<cplx>& psi, double t0, double tau, int steps) {
        const double h = tau / steps;
        for (int i = 0; i < steps; ++i) step(psi, t0 + i * h, h);
    }

private:
    // out = -i H(t) in
    void derivative(double t, const std::vector<cplx>& in, std::vector<cplx>& out) {
        drive_.at(t);
        if (exec_ == Execution::serial) {
            kernels::serial::apply_fock_interaction(layout_, drive_.lower(), drive_.raise(), in, out, columns_);
        } else {
            kernels::parallel::apply_fock_interaction(layout_, drive_.lower(), drive_.raise(), in, out, columns_);
        }
        for (cplx& v : out) v *= -kI;
    }

    void step(std::vector<cplx>& psi, double t, double h) {
        const std::size_t n = psi.size();
        derivative(t, psi, k1_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = psi[i] + 0.5 * h * k1_[i];
        derivative(t + 0.5 * h, tmp_, k2_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = psi[i] + 0.5 * h * k2_[i];
        derivative(t + 0.5 * h, tmp_, k3_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = psi[i] + h * k3_[i];
        derivative(t + h, tmp_, k4_);
        for (std::size_t i = 0; i < n; ++i) psi[i] += h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }

    Drive drive_;
    const kernels::FockLayout& layout_;
    std::size_t columns_;
    Execution exec_;
    std::vector<cplx> k1_, k2_, k3_, k4_, tmp_;
};

double max_abs_difference(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

// max |C^dag C - I| for row-major columns.
double unitarity_defect(const std::vector<cplx>& data, std::size_t rows, std::size_t columns) {
    Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> c(
        data.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(columns));
    const Eigen::MatrixXcd gram = c.adjoint() * c;
    return (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

void apply_sz(const kernels::FockLayout& layout, std::vector<cplx>& data, std::size_t columns) {
    for (std::size_t row = 0; row < layout.dim; ++row) {
        const std::size_t bits = row / layout.field_dim;
        if (std::popcount(bits) & 1) {
            for (std::size_t c = 0; c < columns; ++c) data[row * columns + c] = -data[row * columns + c];
        }
    }
}

// Runs `body(steps, data)` at doubling step counts until two successive
// results agree to the tolerance and the columns stay orthonormal.
template <typename Body>
Propagation converge(const std::vector<cplx>& initial, std::size_t rows, std::size_t columns,
                     const OracleSettings& settings, Body&& body) {
    if (!(settings.tolerance > 0.0)) throw std::invalid_argument("integrator tolerance must be positive");
    if (settings.initial_steps < 1) throw std::invalid_argument("initial step count must be positive");
    std::vector<cplx> coarse = initial;
    int steps = settings.initial_steps;
    body(steps, coarse);
    double last_error = 0.0;
    double last_defect = 0.0;
    while (steps * 2 <= settings.max_steps) {
        steps *= 2;
        std::vector<cplx> fine = initial;
        body(steps, fine);
        last_error = max_abs_difference(fine, coarse) / 15.0;
        last_defect = unitarity_defect(fine, rows, columns);
        if (last_error < settings.tolerance && last_defect < settings.tolerance) {
            Propagation result;
            result.columns = Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                fine.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(columns));
            result.steps = steps;
            result.error_estimate = last_error;
            result.unitarity_defect = last_defect;
            return result;
        }
        coarse = std::move(fine);
    }
    throw IntegratorNonConvergence("RK4 did not reach tolerance " + std::to_string(settings.tolerance) + " within " +
                                   std::to_string(settings.max_steps) + " steps (error estimate " +
                                   std::to_string(last_error) + ", unitarity defect " + std::to_string(last_defect) +
                                   ")");
}

}  // namespace

// ---------------------------------------------------------------------------

FockRegister::FockRegister(const LatticeConfig& config, int n_max, const std::vector<cplx>& qubit_state)
    : config_(config), layout_(make_layout(config, n_max)) {
    const std::size_t qubit_dim = std::size_t{1} << layout_.qubits;
    if (qubit_state.size() != qubit_dim) throw std::invalid_argument("qubit state length must be 2^(M N)");
    amps_.assign(layout_.dim, cplx{0.0, 0.0});
    for (std::size_t b = 0; b < qubit_dim; ++b) amps_[b * layout_.field_dim] = qubit_state[b];
}

double FockRegister::excitation() const {
    double vacuum = 0.0;
    for (std::size_t row = 0; row < layout_.dim; row += layout_.field_dim) vacuum += std::norm(amps_[row]);
    double total = 0.0;
    for (const cplx& a : amps_) total += std::norm(a);
    return std::max(0.0, total - vacuum);
}

double FockRegister::mean_photons(int mode) const {
    if (mode < 0 || mode >= layout_.modes) throw std::out_of_range("mode index outside the layout");
    double n = 0.0;
    for (std::size_t row = 0; row < layout_.dim; ++row) {
        n += layout_.occupation(row % layout_.field_dim, mode) * std::norm(amps_[row]);
    }
    return n;
}

Eigen::MatrixXcd build_hamiltonian(const LatticeConfig& config, double t, int n_max) {
    const kernels::FockLayout layout = make_layout(config, n_max);
    if (layout.dim > kMaxDenseDimension) {
        throw std::invalid_argument("dense Hamiltonian of dimension " + std::to_string(layout.dim) +
                                    " exceeds the cap of " + std::to_string(kMaxDenseDimension));
    }
    const auto modes = enumerate_modes(config);
    const double c = config.coupling / std::sqrt(static_cast<double>(config.sites()));
    const auto dim = static_cast<Eigen::Index>(layout.dim);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t col = 0; col < layout.dim; ++col) {
        const std::size_t bits = col / layout.field_dim;
        const std::size_t f = col % layout.field_dim;
        for (int q = 0; q < layout.modes; ++q) {
            const Mode& mode = modes[static_cast<std::size_t>(q)];
            const int n = layout.occupation(f, q);
            const std::size_t stride = layout.stride[static_cast<std::size_t>(q)];
            for (int s = 0; s < layout.qubits; ++s) {
                const double phase = mode.L * (s / config.cols) + mode.K * (s % config.cols);
                const cplx coef = std::polar(c, -(mode.omega * t + phase));
                const std::size_t flipped = (bits ^ (std::size_t{1} << s)) * layout.field_dim;
                if (n > 0) {
                    h(static_cast<Eigen::Index>(flipped + f - stride), static_cast<Eigen::Index>(col)) +=
                        coef * std::sqrt(static_cast<double>(n));
                }
                if (n + 1 < layout.levels) {
                    h(static_cast<Eigen::Index>(flipped + f + stride), static_cast<Eigen::Index>(col)) +=
                        std::conj(coef) * std::sqrt(static_cast<double>(n + 1));
                }
            }
        }
    }
    return h;
}

Propagation evolve(const LatticeConfig& config, double tau, const OracleSettings& settings) {
    if (!(tau >= 0.0)) throw std::domain_error("interaction time must be >= 0");
    const kernels::FockLayout layout = make_layout(config, settings.n_max);
    if (layout.dim > kMaxDenseDimension) {
        throw std::invalid_argument("full propagator of dimension " + std::to_string(layout.dim) +
                                    " exceeds the cap of " + std::to_string(kMaxDenseDimension));
    }
    const std::size_t n = layout.dim;
    std::vector<cplx> identity(n * n, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) identity[i * n + i] = 1.0;
    Integrator integrator(config, layout, n, settings.exec);
    return converge(identity, n, n, settings,
                    [&](int steps, std::vector<cplx>& data) { integrator.run(data, 0.0, tau, steps); });
}

Propagation evolve_state(FockRegister& reg, double t0, double tau, const OracleSettings& settings) {
    if (!(tau >= 0.0)) throw std::domain_error("interaction time must be >= 0");
    Integrator integrator(reg.config(), reg.layout(), 1, settings.exec);
    const double norm = std::sqrt(kernels::parallel::norm_squared(reg.amplitudes()));
    if (std::abs(norm - 1.0) > 1e-10) throw std::invalid_argument("Fock register is not normalised");
    Propagation p = converge(reg.amplitudes(), reg.layout().dim, 1, settings,
                             [&](int steps, std::vector<cplx>& data) { integrator.run(data, t0, tau, steps); });
    for (std::size_t i = 0; i < reg.layout().dim; ++i) reg.amplitudes()[i] = p.columns(static_cast<Eigen::Index>(i), 0);
    return p;
}

EvolutionReport echo_evolve(const LatticeConfig& config, double tau, const OracleSettings& settings) {
    if (!(tau >= 0.0)) throw std::domain_error("interaction time must be >= 0");
    const kernels::FockLayout layout = make_layout(config, settings.n_max);
    const std::size_t qubit_dim = std::size_t{1} << layout.qubits;
    std::vector<cplx> initial(layout.dim * qubit_dim, cplx{0.0, 0.0});
    for (std::size_t b = 0; b < qubit_dim; ++b) initial[(b * layout.field_dim) * qubit_dim + b] = 1.0;

    Integrator integrator(config, layout, qubit_dim, settings.exec);
    const double second_start = settings.reset_time_origin ? 0.0 : tau;
    const Propagation p = converge(initial, layout.dim, qubit_dim, settings, [&](int steps, std::vector<cplx>& data) {
        integrator.run(data, 0.0, tau, steps);
        apply_sz(layout, data, qubit_dim);
        integrator.run(data, second_start, tau, steps);
        apply_sz(layout, data, qubit_dim);
    });

    EvolutionReport report;
    report.rows = config.rows;
    report.cols = config.cols;
    report.tau = tau;
    const auto q = static_cast<Eigen::Index>(qubit_dim);
    report.vacuum_block.resize(q, q);
    for (Eigen::Index b = 0; b < q; ++b) {
        report.vacuum_block.row(b) = p.columns.row(b * static_cast<Eigen::Index>(layout.field_dim));
    }
    const Eigen::MatrixXcd leak =
        Eigen::MatrixXcd::Identity(q, q) - report.vacuum_block.adjoint() * report.vacuum_block;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(leak, Eigen::EigenvaluesOnly);
    report.residual_excitation = std::max(0.0, solver.eigenvalues().maxCoeff());
    report.steps = p.steps;
    report.error_estimate = p.error_estimate;
    report.unitarity_defect = p.unitarity_defect;
    return report;
}

double extract_pair_phase(const EvolutionReport& report, int site_a, int site_b) {
    const int qubits = report.rows * report.cols;
    if (site_a < 0 || site_a >= qubits || site_b < 0 || site_b >= qubits || site_a == site_b) {
        throw std::out_of_range("pair sites must be distinct sites of the array");
    }
    if (report.residual_excitation > 1e-6) {
        throw InvalidExtraction("field not disentangled after the echo (residual excitation " +
                                std::to_string(report.residual_excitation) + ")");
    }
    // Rotate the vacuum block into the sigma^x eigenbasis.
    const Eigen::Index dim = report.vacuum_block.rows();
    Eigen::MatrixXcd hadamard = Eigen::MatrixXcd::Ones(1, 1);
    const Eigen::Matrix2cd h1 = (Eigen::Matrix2cd() << 1, 1, 1, -1).finished() / std::sqrt(2.0);
    for (int i = 0; i < qubits; ++i) {
        Eigen::MatrixXcd next(hadamard.rows() * 2, hadamard.cols() * 2);
        // Kronecker product h1 (x) hadamard: qubit i becomes the highest bit.
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) {
                next.block(r * hadamard.rows(), c * hadamard.cols(), hadamard.rows(), hadamard.cols()) =
                    h1(r, c) * hadamard;
            }
        }
        hadamard = std::move(next);
    }
    const Eigen::MatrixXcd bx = hadamard * report.vacuum_block * hadamard;
    if (bx.rows() != dim) throw std::logic_error("vacuum block has the wrong size");
    const auto element = [&](int xa, int xb) {
        const Eigen::Index idx = (static_cast<Eigen::Index>(xa) << site_a) | (static_cast<Eigen::Index>(xb) << site_b);
        return bx(idx, idx);
    };
    const cplx combo = element(0, 0) * element(1, 1) * std::conj(element(0, 1)) * std::conj(element(1, 0));
    return std::arg(combo) / 4.0;
}

Eigen::MatrixXcd collective_operator(const LatticeConfig& config, const Mode& mode) {
    const int qubits = config.sites();
    const auto dim = static_cast<Eigen::Index>(1) << qubits;
    Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(dim, dim);
    for (int s = 0; s < qubits; ++s) {
        const cplx w = std::polar(1.0, mode.L * (s / config.cols) + mode.K * (s % config.cols));
        for (Eigen::Index b = 0; b < dim; ++b) j(b ^ (Eigen::Index{1} << s), b) += w;
    }
    return j;
}

Eigen::MatrixXcd total_sz(int qubits, std::optional<int> skipped_site) {
    const auto dim = static_cast<Eigen::Index>(1) << qubits;
    std::size_t mask = (std::size_t{1} << qubits) - 1;
    if (skipped_site) mask &= ~(std::size_t{1} << *skipped_site);
    Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index b = 0; b < dim; ++b) sz(b, b) = (std::popcount(static_cast<std::size_t>(b) & mask) & 1) ? -1.0 : 1.0;
    return sz;
}

Eigen::MatrixXcd analytic_echo_unitary(const LatticeConfig& config, double tau) {
    config.validate();
    const auto dim = static_cast<Eigen::Index>(1) << config.sites();
    Eigen::MatrixXcd generator = Eigen::MatrixXcd::Zero(dim, dim);
    for (const Mode& mode : enumerate_modes(config)) {
        const Eigen::MatrixXcd j = collective_operator(config, mode);
        generator += 2.0 * gamma_mode(config, mode, tau) * (j.adjoint() * j);
    }
    // Hermitian generator: exponentiate through its eigenbasis.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(generator);
    const Eigen::VectorXcd phases =
        solver.eigenvalues().unaryExpr([](double v) { return std::polar(1.0, v); }).cast<cplx>();
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

bool IdentityReport::holds(double tol) const {
    return commutator_sz_jdagj <= tol && anticommutator_sz_j <= tol && anticommutator_sz_jdag <= tol &&
           mutual_commutator <= tol;
}

IdentityReport check_identities(int rows, int cols, std::optional<int> skipped_site) {
    LatticeConfig config;
    config.rows = rows;
    config.cols = cols;
    config.validate();
    if (config.sites() > 4) throw std::invalid_argument("identity check handles at most 4 sites");
    if (skipped_site && (*skipped_site < 0 || *skipped_site >= config.sites())) {
        throw std::out_of_range("skipped site outside the array");
    }
    const Eigen::MatrixXcd sz = total_sz(config.sites(), skipped_site);
    const auto modes = enumerate_modes(config);
    std::vector<Eigen::MatrixXcd> js;
    for (const Mode& mode : modes) js.push_back(collective_operator(config, mode));

    const auto max_abs = [](const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); };
    IdentityReport report;
    for (std::size_t a = 0; a < js.size(); ++a) {
        const Eigen::MatrixXcd& j = js[a];
        const Eigen::MatrixXcd jdag = j.adjoint();
        const Eigen::MatrixXcd n = jdag * j;
        report.commutator_sz_jdagj = std::max(report.commutator_sz_jdagj, max_abs(sz * n - n * sz));
        report.anticommutator_sz_j = std::max(report.anticommutator_sz_j, max_abs(sz * j + j * sz));
        report.anticommutator_sz_jdag = std::max(report.anticommutator_sz_jdag, max_abs(sz * jdag + jdag * sz));
        for (std::size_t b = 0; b < js.size(); ++b) {
            const Eigen::MatrixXcd& k = js[b];
            report.mutual_commutator = std::max(report.mutual_commutator, max_abs(j * k - k * j));
            report.mutual_commutator =
                std::max(report.mutual_commutator, max_abs(j * k.adjoint() - k.adjoint() * j));
        }
    }
    return report;
}

}  // namespace cavity
