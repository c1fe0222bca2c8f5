#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cavity/compensated_sum.hpp"
#include "cavity/kernels.hpp"

namespace cavity::kernels {

bool openmp_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace parallel {

using index_t = std::int64_t;

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const index_t count = static_cast<index_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (index_t i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
}

void mode_sum_table(std::span<const double> weight, std::span<const double> L, std::span<const double> K,
                    int rows, int cols, std::span<double> table) {
    const index_t total = static_cast<index_t>(rows) * cols;
#pragma omp parallel for schedule(static)
    for (index_t e = 0; e < total; ++e) {
        const int dm = static_cast<int>(e / cols);
        const int dn = static_cast<int>(e % cols);
        CompensatedSum sum;
        for (std::size_t q = 0; q < weight.size(); ++q) sum += weight[q] * std::cos(L[q] * dm + K[q] * dn);
        table[static_cast<std::size_t>(e)] = sum.value();
    }
}

void apply_xx(std::span<cplx> amps, int a, int b, double theta) {
    const int lo = std::min(a, b);
    const int hi = std::max(a, b);
    const std::size_t ma = std::size_t{1} << a;
    const std::size_t mb = std::size_t{1} << b;
    const cplx c = std::cos(theta);
    const cplx is = cplx{0.0, std::sin(theta)};
    const index_t quarter = static_cast<index_t>(amps.size() / 4);
#pragma omp parallel for schedule(static)
    for (index_t k = 0; k < quarter; ++k) {
        const std::size_t i = insert_zero_bit(insert_zero_bit(static_cast<std::size_t>(k), lo), hi);
        const std::size_t pairs[2][2] = {{i, i | ma | mb}, {i | ma, i | mb}};
        for (const auto& p : pairs) {
            const cplx x = amps[p[0]];
            const cplx y = amps[p[1]];
            amps[p[0]] = c * x + is * y;
            amps[p[1]] = c * y + is * x;
        }
    }
}

void walsh_hadamard(std::span<cplx> amps) {
    const double scale = 1.0 / std::sqrt(2.0);
    const index_t half = static_cast<index_t>(amps.size() / 2);
    for (int bit = 0; (std::size_t{1} << bit) < amps.size(); ++bit) {
        const std::size_t h = std::size_t{1} << bit;
#pragma omp parallel for schedule(static)
        for (index_t k = 0; k < half; ++k) {
            const std::size_t j = insert_zero_bit(static_cast<std::size_t>(k), bit);
            const cplx x = amps[j];
            const cplx y = amps[j + h];
            amps[j] = (x + y) * scale;
            amps[j + h] = (x - y) * scale;
        }
    }
}

void apply_ising_phases(std::span<cplx> amps, std::span<const XXCoupling> couplings) {
    const index_t size = static_cast<index_t>(amps.size());
#pragma omp parallel for schedule(static)
    for (index_t i = 0; i < size; ++i) {
        double angle = 0.0;
        for (const XXCoupling& cpl : couplings) {
            const bool parity = (((i >> cpl.a) ^ (i >> cpl.b)) & 1) != 0;
            angle += parity ? -cpl.theta : cpl.theta;
        }
        amps[static_cast<std::size_t>(i)] *= std::polar(1.0, angle);
    }
}

// Commuting XX rotations are diagonal in the X basis: rotate, phase, rotate back.
void apply_xx_all(std::span<cplx> amps, std::span<const XXCoupling> couplings) {
    if (couplings.empty()) return;
    walsh_hadamard(amps);
    apply_ising_phases(amps, couplings);
    walsh_hadamard(amps);
}

double norm_squared(std::span<const cplx> amps) {
    const index_t size = static_cast<index_t>(amps.size());
    double sum = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : sum)
    for (index_t i = 0; i < size; ++i) sum += std::norm(amps[static_cast<std::size_t>(i)]);
    return sum;
}

cplx inner_product(std::span<const cplx> bra, std::span<const cplx> ket) {
    const index_t size = static_cast<index_t>(bra.size());
    double re = 0.0;
    double im = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : re, im)
    for (index_t i = 0; i < size; ++i) {
        const cplx t = std::conj(bra[static_cast<std::size_t>(i)]) * ket[static_cast<std::size_t>(i)];
        re += t.real();
        im += t.imag();
    }
    return {re, im};
}

cplx pauli_overlap(std::span<const cplx> amps, std::uint32_t xmask, std::uint32_t zmask) {
    const index_t size = static_cast<index_t>(amps.size());
    double re = 0.0;
    double im = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : re, im)
    for (index_t i = 0; i < size; ++i) {
        const auto j = static_cast<std::uint32_t>(i);
        const double sign = (std::popcount(j & zmask) & 1) ? -1.0 : 1.0;
        const cplx t = std::conj(amps[j ^ xmask]) * sign * amps[j];
        re += t.real();
        im += t.imag();
    }
    return {re, im};
}

// Gather form: each output row pulls from the rows that map onto it, so rows
// can be filled independently.
void apply_fock_interaction(const FockLayout& layout, std::span<const cplx> lower, std::span<const cplx> raise,
                            std::span<const cplx> in, std::span<cplx> out, std::size_t columns) {
    const index_t rows = static_cast<index_t>(layout.dim);
#pragma omp parallel for schedule(static)
    for (index_t row = 0; row < rows; ++row) {
        const std::size_t bits = static_cast<std::size_t>(row) / layout.field_dim;
        const std::size_t f = static_cast<std::size_t>(row) % layout.field_dim;
        cplx* dst = out.data() + static_cast<std::size_t>(row) * columns;
        for (std::size_t c = 0; c < columns; ++c) dst[c] = cplx{0.0, 0.0};
        for (int q = 0; q < layout.modes; ++q) {
            const int n = layout.occupation(f, q);
            const std::size_t stride = layout.stride[static_cast<std::size_t>(q)];
            for (int s = 0; s < layout.qubits; ++s) {
                const std::size_t src_bits = bits ^ (std::size_t{1} << s);
                const std::size_t coef = static_cast<std::size_t>(q * layout.qubits + s);
                if (n + 1 < layout.levels) {  // from |n+1> via a_q
                    const cplx w = lower[coef] * std::sqrt(static_cast<double>(n + 1));
                    const cplx* src = in.data() + (src_bits * layout.field_dim + f + stride) * columns;
                    for (std::size_t c = 0; c < columns; ++c) dst[c] += w * src[c];
                }
                if (n > 0) {  // from |n-1> via a_q^dag
                    const cplx w = raise[coef] * std::sqrt(static_cast<double>(n));
                    const cplx* src = in.data() + (src_bits * layout.field_dim + f - stride) * columns;
                    for (std::size_t c = 0; c < columns; ++c) dst[c] += w * src[c];
                }
            }
        }
    }
}

}  // namespace parallel
}  // namespace cavity::kernels
