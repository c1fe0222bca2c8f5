#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "cavity/compensated_sum.hpp"
#include "cavity/kernels.hpp"

namespace cavity::kernels {

FockLayout::FockLayout(int qubits_, int modes_, int n_max)
    : qubits(qubits_), modes(modes_), levels(n_max + 1) {
    if (qubits < 0 || modes < 0 || n_max < 0) throw std::invalid_argument("invalid Fock layout");
    stride.resize(static_cast<std::size_t>(modes));
    field_dim = 1;
    for (int q = 0; q < modes; ++q) {
        stride[static_cast<std::size_t>(q)] = field_dim;
        field_dim *= static_cast<std::size_t>(levels);
    }
    dim = (std::size_t{1} << qubits) * field_dim;
}

namespace serial {

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

void mode_sum_table(std::span<const double> weight, std::span<const double> L, std::span<const double> K,
                    int rows, int cols, std::span<double> table) {
    for (int dm = 0; dm < rows; ++dm) {
        for (int dn = 0; dn < cols; ++dn) {
            CompensatedSum sum;
            for (std::size_t q = 0; q < weight.size(); ++q) sum += weight[q] * std::cos(L[q] * dm + K[q] * dn);
            table[static_cast<std::size_t>(dm * cols + dn)] = sum.value();
        }
    }
}

void apply_xx(std::span<cplx> amps, int a, int b, double theta) {
    const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
    const cplx c = std::cos(theta);
    const cplx is = cplx{0.0, std::sin(theta)};
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const std::size_t j = i ^ mask;
        if (j < i) continue;
        const cplx x = amps[i];
        const cplx y = amps[j];
        amps[i] = c * x + is * y;
        amps[j] = c * y + is * x;
    }
}

void apply_xx_all(std::span<cplx> amps, std::span<const XXCoupling> couplings) {
    for (const XXCoupling& cpl : couplings) apply_xx(amps, cpl.a, cpl.b, cpl.theta);
}

void walsh_hadamard(std::span<cplx> amps) {
    const double scale = 1.0 / std::sqrt(2.0);
    for (std::size_t h = 1; h < amps.size(); h <<= 1) {
        for (std::size_t i = 0; i < amps.size(); i += 2 * h) {
            for (std::size_t j = i; j < i + h; ++j) {
                const cplx x = amps[j];
                const cplx y = amps[j + h];
                amps[j] = (x + y) * scale;
                amps[j + h] = (x - y) * scale;
            }
        }
    }
}

void apply_ising_phases(std::span<cplx> amps, std::span<const XXCoupling> couplings) {
    for (std::size_t i = 0; i < amps.size(); ++i) {
        double angle = 0.0;
        for (const XXCoupling& cpl : couplings) {
            const bool parity = (((i >> cpl.a) ^ (i >> cpl.b)) & 1U) != 0;
            angle += parity ? -cpl.theta : cpl.theta;
        }
        amps[i] *= std::polar(1.0, angle);
    }
}

double norm_squared(std::span<const cplx> amps) {
    double sum = 0.0;
    for (const cplx& a : amps) sum += std::norm(a);
    return sum;
}

cplx inner_product(std::span<const cplx> bra, std::span<const cplx> ket) {
    cplx sum{0.0, 0.0};
    for (std::size_t i = 0; i < bra.size(); ++i) sum += std::conj(bra[i]) * ket[i];
    return sum;
}

cplx pauli_overlap(std::span<const cplx> amps, std::uint32_t xmask, std::uint32_t zmask) {
    cplx sum{0.0, 0.0};
    for (std::size_t j = 0; j < amps.size(); ++j) {
        const double sign = (std::popcount(static_cast<std::uint32_t>(j) & zmask) & 1) ? -1.0 : 1.0;
        sum += std::conj(amps[j ^ xmask]) * sign * amps[j];
    }
    return sum;
}

// Scatter form: walk the input rows and push every term to its target row.
void apply_fock_interaction(const FockLayout& layout, std::span<const cplx> lower, std::span<const cplx> raise,
                            std::span<const cplx> in, std::span<cplx> out, std::size_t columns) {
    std::fill(out.begin(), out.end(), cplx{0.0, 0.0});
    const std::size_t qubit_dim = std::size_t{1} << layout.qubits;
    for (std::size_t bits = 0; bits < qubit_dim; ++bits) {
        for (std::size_t f = 0; f < layout.field_dim; ++f) {
            const std::size_t src = bits * layout.field_dim + f;
            for (int q = 0; q < layout.modes; ++q) {
                const int n = layout.occupation(f, q);
                const std::size_t stride = layout.stride[static_cast<std::size_t>(q)];
                for (int s = 0; s < layout.qubits; ++s) {
                    const std::size_t flipped = bits ^ (std::size_t{1} << s);
                    const std::size_t coef = static_cast<std::size_t>(q * layout.qubits + s);
                    if (n > 0) {  // a_q |n> = sqrt(n) |n-1>
                        const std::size_t dst = flipped * layout.field_dim + f - stride;
                        const cplx w = lower[coef] * std::sqrt(static_cast<double>(n));
                        for (std::size_t c = 0; c < columns; ++c) out[dst * columns + c] += w * in[src * columns + c];
                    }
                    if (n + 1 < layout.levels) {  // a_q^dag |n> = sqrt(n+1) |n+1>
                        const std::size_t dst = flipped * layout.field_dim + f + stride;
                        const cplx w = raise[coef] * std::sqrt(static_cast<double>(n + 1));
                        for (std::size_t c = 0; c < columns; ++c) out[dst * columns + c] += w * in[src * columns + c];
                    }
                }
            }
        }
    }
}

}  // namespace serial
}  // namespace cavity::kernels
