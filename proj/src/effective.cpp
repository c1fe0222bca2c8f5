#include "cavity/effective.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace cavity {

namespace {

int wrap(int x, int period) {
    const int r = x % period;
    return r < 0 ? r + period : r;
}

bool bit(std::size_t index, int q) { return ((index >> q) & 1U) != 0; }

std::vector<int> degrees(int rows, int cols, bool periodic) {
    std::vector<int> deg(static_cast<std::size_t>(rows * cols), 0);
    for (const auto& [a, b] : lattice_edges(rows, cols, periodic)) {
        ++deg[static_cast<std::size_t>(a)];
        ++deg[static_cast<std::size_t>(b)];
    }
    return deg;
}

void apply_z_phases(QubitRegister& reg, const std::vector<double>& angle) {
    auto amps = reg.amplitudes();
    const int n = reg.qubits();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        double total = 0.0;
        for (int q = 0; q < n; ++q) total += bit(i, q) ? -angle[static_cast<std::size_t>(q)] : angle[static_cast<std::size_t>(q)];
        amps[i] *= std::polar(1.0, total);
    }
}

}  // namespace

QubitRegister product_state(int rows, int cols, Spin spin) {
    QubitRegister reg(rows, cols);
    if (spin == Spin::down) {
        auto amps = reg.amplitudes();
        amps[0] = 0.0;
        amps[amps.size() - 1] = 1.0;
    }
    return reg;
}

QubitRegister product_state(int rows, int cols, const std::vector<SingleQubitState>& sites) {
    if (sites.size() != static_cast<std::size_t>(rows * cols)) {
        throw std::invalid_argument("need one single-qubit state per site");
    }
    QubitRegister reg(rows, cols);
    auto amps = reg.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        cplx a{1.0, 0.0};
        for (std::size_t q = 0; q < sites.size(); ++q) a *= sites[q][bit(i, static_cast<int>(q)) ? 1 : 0];
        amps[i] = a;
    }
    if (std::abs(reg.norm() - 1.0) > 1e-10) throw std::invalid_argument("single-qubit states must be normalised");
    return reg;
}

std::vector<kernels::XXCoupling> interaction_pairs(const PhaseShiftTable& table, bool nn_only) {
    const int rows = table.rows();
    const int cols = table.cols();
    std::vector<kernels::XXCoupling> pairs;
    for (int a = 0; a < rows * cols; ++a) {
        for (int b = a + 1; b < rows * cols; ++b) {
            const int dm = b / cols - a / cols;
            const int dn = b % cols - a % cols;
            const int rm = wrap(dm, rows);
            const int rn = wrap(dn, cols);
            if (nn_only) {
                const bool vertical = rn == 0 && rows > 1 && (rm == 1 || rm == rows - 1);
                const bool horizontal = rm == 0 && cols > 1 && (rn == 1 || rn == cols - 1);
                if (!vertical && !horizontal) continue;
            }
            const double gamma = table.at(dm, dn);
            if (gamma != 0.0) pairs.push_back({a, b, gamma});
        }
    }
    return pairs;
}

void apply_pairwise_xx(QubitRegister& reg, const PhaseShiftTable& table, bool nn_only, Execution exec) {
    if (reg.rows() != table.rows() || reg.cols() != table.cols()) {
        throw std::invalid_argument("phase table and register have different lattice shapes");
    }
    const auto pairs = interaction_pairs(table, nn_only);
    if (exec == Execution::serial) {
        kernels::serial::apply_xx_all(reg.amplitudes(), pairs);
    } else {
        kernels::parallel::apply_xx_all(reg.amplitudes(), pairs);
    }
}

std::vector<std::pair<int, int>> lattice_edges(int rows, int cols, bool periodic) {
    std::set<std::pair<int, int>> edges;
    const auto add = [&](int a, int b) {
        if (a != b) edges.insert({std::min(a, b), std::max(a, b)});
    };
    for (int m = 0; m < rows; ++m) {
        for (int n = 0; n < cols; ++n) {
            const int here = m * cols + n;
            if (n + 1 < cols) {
                add(here, m * cols + n + 1);
            } else if (periodic) {
                add(here, m * cols);
            }
            if (m + 1 < rows) {
                add(here, (m + 1) * cols + n);
            } else if (periodic) {
                add(here, n);
            }
        }
    }
    return {edges.begin(), edges.end()};
}

QubitRegister graph_state(int rows, int cols, bool periodic, const std::vector<SingleQubitState>& sites) {
    QubitRegister reg = product_state(rows, cols, sites);
    const auto edges = lattice_edges(rows, cols, periodic);
    auto amps = reg.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        int parity = 0;
        for (const auto& [a, b] : edges) parity ^= (bit(i, a) && bit(i, b)) ? 1 : 0;
        if (parity) amps[i] = -amps[i];
    }
    return reg;
}

QubitRegister reference_cluster(int rows, int cols, bool periodic) {
    const double h = 1.0 / std::sqrt(2.0);
    return graph_state(rows, cols, periodic,
                       std::vector<SingleQubitState>(static_cast<std::size_t>(rows * cols), {h, h}));
}

double cluster_correction_angle(int degree) { return -std::numbers::pi * degree / 4.0; }

void apply_cluster_correction(QubitRegister& reg, bool periodic) {
    kernels::parallel::walsh_hadamard(reg.amplitudes());
    std::vector<double> angle;
    for (int d : degrees(reg.rows(), reg.cols(), periodic)) angle.push_back(cluster_correction_angle(d));
    apply_z_phases(reg, angle);
}

void undo_cluster_correction(QubitRegister& reg, bool periodic) {
    std::vector<double> angle;
    for (int d : degrees(reg.rows(), reg.cols(), periodic)) angle.push_back(-cluster_correction_angle(d));
    apply_z_phases(reg, angle);
    kernels::parallel::walsh_hadamard(reg.amplitudes());
}

double cluster_fidelity(const QubitRegister& generated, bool periodic) {
    QubitRegister corrected = generated;
    apply_cluster_correction(corrected, periodic);
    const QubitRegister reference = reference_cluster(generated.rows(), generated.cols(), periodic);
    return std::min(1.0, std::norm(overlap(reference, corrected)));
}

double stabilizer_expectation(const QubitRegister& reg, const PauliString& pauli) {
    if (pauli.qubits() != reg.qubits()) throw std::invalid_argument("Pauli string length does not match the register");
    cplx value = kernels::parallel::pauli_overlap(reg.amplitudes(), pauli.x_mask(), pauli.z_mask());
    PauliString phase_only(0);
    phase_only.rotate_phase(pauli.y_count());
    value *= pauli.phase() * phase_only.phase();
    return value.real();
}

PauliString cluster_stabilizer(int rows, int cols, bool periodic, int site) {
    if (site < 0 || site >= rows * cols) throw std::out_of_range("stabilizer site outside the lattice");
    PauliString p(rows * cols);
    p.set(site, PauliString::Letter::X);
    for (const auto& [a, b] : lattice_edges(rows, cols, periodic)) {
        if (a == site) p.set(b, PauliString::Letter::Z);
        if (b == site) p.set(a, PauliString::Letter::Z);
    }
    return p;
}

Matrix2 reduced_single_qubit(const QubitRegister& reg, int site) {
    if (site < 0 || site >= reg.qubits()) throw std::out_of_range("site outside the register");
    const auto amps = reg.amplitudes();
    const std::size_t mask = std::size_t{1} << site;
    double p0 = 0.0;
    double p1 = 0.0;
    cplx coherence{0.0, 0.0};
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & mask) continue;
        p0 += std::norm(amps[i]);
        p1 += std::norm(amps[i | mask]);
        coherence += amps[i] * std::conj(amps[i | mask]);
    }
    return {{{cplx{p0, 0.0}, coherence}, {std::conj(coherence), cplx{p1, 0.0}}}};
}

double single_site_purity(const QubitRegister& reg, int site) {
    const Matrix2 rho = reduced_single_qubit(reg, site);
    double purity = 0.0;
    for (const auto& row : rho) {
        for (const cplx& v : row) purity += std::norm(v);
    }
    return purity;
}

}  // namespace cavity
