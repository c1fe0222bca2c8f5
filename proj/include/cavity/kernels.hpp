#pragma once

// Data-parallel inner loops shared by the simulator modules.
//
// Every kernel exists twice with identical signatures: `serial` is the plain
// reference implementation kept for testing, `parallel` is the OpenMP
// version used by default. Where the parallel version uses a different
// algorithm (e.g. the Walsh-Hadamard route for commuting XX rotations or the
// gather-form Fock matvec), the serial one follows the direct definition so
// the two stay independent.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace cavity::kernels {

using cplx = std::complex<double>;

/// exp(i theta X_a X_b) coefficient between two qubits of a register.
struct XXCoupling {
    int a = 0;
    int b = 0;
    double theta = 0.0;
};

/// Index layout of (qubits) x (bosonic modes truncated at n_max). Full index
/// = qubit_bits * field_dim + sum_q n_q * stride[q].
struct FockLayout {
    int qubits = 0;
    int modes = 0;
    int levels = 0;  // n_max + 1
    std::size_t field_dim = 1;
    std::size_t dim = 0;
    std::vector<std::size_t> stride;

    FockLayout() = default;
    FockLayout(int qubits, int modes, int n_max);

    int occupation(std::size_t field_index, int mode) const {
        return static_cast<int>((field_index / stride[static_cast<std::size_t>(mode)]) %
                                static_cast<std::size_t>(levels));
    }
};

/// True when the parallel kernels were compiled with OpenMP.
bool openmp_enabled();
int max_threads();

#define CAVITY_KERNEL_DECLARATIONS                                                               \
    /* fn(i) for i in [0, n); fn must not throw. */                                               \
    void for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn);               \
    /* table[dm * cols + dn] = sum_q weight_q cos(L_q dm + K_q dn), compensated. */               \
    void mode_sum_table(std::span<const double> weight, std::span<const double> L,              \
                        std::span<const double> K, int rows, int cols, std::span<double> table); \
    /* amps <- exp(i theta X_a X_b) amps */                                                       \
    void apply_xx(std::span<cplx> amps, int a, int b, double theta);                              \
    /* amps <- prod_c exp(i theta_c X_a X_b) amps */                                              \
    void apply_xx_all(std::span<cplx> amps, std::span<const XXCoupling> couplings);               \
    /* amps <- H^{(x) n} amps, normalised */                                                      \
    void walsh_hadamard(std::span<cplx> amps);                                                    \
    /* amps_i <- exp(i sum_c theta_c s_a s_b) amps_i with s = 1 - 2 bit */                        \
    void apply_ising_phases(std::span<cplx> amps, std::span<const XXCoupling> couplings);         \
    double norm_squared(std::span<const cplx> amps);                                              \
    cplx inner_product(std::span<const cplx> bra, std::span<const cplx> ket);                     \
    /* sum_j conj(psi[j ^ xmask]) (-1)^{popcount(j & zmask)} psi[j] */                            \
    cplx pauli_overlap(std::span<const cplx> amps, std::uint32_t xmask, std::uint32_t zmask);     \
    /* out = sum_{q,s} (lower[q*Q+s] X_s a_q + raise[q*Q+s] X_s a_q^dag) in, for `columns`        \
       column vectors stored row-major (index = row * columns + column). */                      \
    void apply_fock_interaction(const FockLayout& layout, std::span<const cplx> lower,            \
                                std::span<const cplx> raise, std::span<const cplx> in,           \
                                std::span<cplx> out, std::size_t columns);

namespace serial {
CAVITY_KERNEL_DECLARATIONS
}

namespace parallel {
CAVITY_KERNEL_DECLARATIONS
}

#undef CAVITY_KERNEL_DECLARATIONS

/// Index with a zero bit inserted at position `bit` (used to enumerate
/// amplitude pairs differing in one qubit).
inline std::size_t insert_zero_bit(std::size_t k, int bit) {
    const std::size_t low = k & ((std::size_t{1} << bit) - 1);
    return ((k >> bit) << (bit + 1)) | low;
}

}  // namespace cavity::kernels
