#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cavity/kernels.hpp"

using namespace cavity;
using namespace cavity::kernels;

namespace {

std::vector<cplx> random_state(int qubits, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<cplx> v(std::size_t{1} << qubits);
    double s = 0.0;
    for (auto& a : v) {
        a = {n(rng), n(rng)};
        s += std::norm(a);
    }
    for (auto& a : v) a /= std::sqrt(s);
    return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

std::vector<XXCoupling> random_couplings(int qubits, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<XXCoupling> c;
    for (int a = 0; a < qubits; ++a) {
        for (int b = a + 1; b < qubits; ++b) c.push_back({a, b, u(rng)});
    }
    return c;
}

}  // namespace

TEST(Kernels, XXRotationsAgree) {
    const auto couplings = random_couplings(10, 3);
    auto s = random_state(10, 1);
    auto p = s;
    serial::apply_xx_all(s, couplings);
    parallel::apply_xx_all(p, couplings);
    EXPECT_LT(max_diff(s, p), 1e-12);
    EXPECT_NEAR(serial::norm_squared(s), 1.0, 1e-12);
}

TEST(Kernels, SingleXXMatchesDefinition) {
    // exp(i t XX) = cos t + i sin t XX
    auto v = random_state(3, 4);
    auto w = v;
    serial::apply_xx(w, 0, 2, 0.37);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const cplx expected = std::cos(0.37) * v[i] + cplx(0.0, std::sin(0.37)) * v[i ^ 0b101];
        EXPECT_NEAR(std::abs(w[i] - expected), 0.0, 1e-15);
    }
    auto q = v;
    parallel::apply_xx(q, 0, 2, 0.37);
    EXPECT_LT(max_diff(w, q), 1e-15);
}

TEST(Kernels, WalshHadamardInvolution) {
    const auto v = random_state(8, 5);
    auto s = v;
    auto p = v;
    serial::walsh_hadamard(s);
    parallel::walsh_hadamard(p);
    EXPECT_LT(max_diff(s, p), 1e-14);
    serial::walsh_hadamard(s);
    EXPECT_LT(max_diff(s, v), 1e-14);
}

TEST(Kernels, IsingPhasesAgree) {
    const auto couplings = random_couplings(7, 8);
    auto s = random_state(7, 6);
    auto p = s;
    serial::apply_ising_phases(s, couplings);
    parallel::apply_ising_phases(p, couplings);
    EXPECT_LT(max_diff(s, p), 1e-13);
}

TEST(Kernels, ReductionsAgree) {
    const auto a = random_state(12, 9);
    const auto b = random_state(12, 10);
    EXPECT_NEAR(serial::norm_squared(a), parallel::norm_squared(a), 1e-13);
    EXPECT_NEAR(std::abs(serial::inner_product(a, b) - parallel::inner_product(a, b)), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(serial::pauli_overlap(a, 0x0f3, 0x105) - parallel::pauli_overlap(a, 0x0f3, 0x105)), 0.0,
                1e-13);
    EXPECT_NEAR(std::abs(serial::pauli_overlap(a, 0, 0) - 1.0), 0.0, 1e-13);
}

TEST(Kernels, ModeSumTableAgree) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int rows = 7;
    const int cols = 5;
    std::vector<double> w(rows * cols), L(rows * cols), K(rows * cols);
    for (int l = 0; l < rows; ++l) {
        for (int k = 0; k < cols; ++k) {
            const int q = l * cols + k;
            w[q] = u(rng);
            L[q] = 2.0 * M_PI * l / rows;
            K[q] = 2.0 * M_PI * k / cols;
        }
    }
    std::vector<double> s(rows * cols), p(rows * cols);
    serial::mode_sum_table(w, L, K, rows, cols, s);
    parallel::mode_sum_table(w, L, K, rows, cols, p);
    for (int i = 0; i < rows * cols; ++i) EXPECT_NEAR(s[i], p[i], 1e-14);
    double direct = 0.0;
    for (int q = 0; q < rows * cols; ++q) direct += w[q] * std::cos(L[q] * 2 + K[q] * 3);
    EXPECT_NEAR(s[2 * cols + 3], direct, 1e-13);
}

TEST(Kernels, FockInteractionAgree) {
    const FockLayout layout(2, 2, 3);
    EXPECT_EQ(layout.dim, 4u * 16u);
    std::mt19937_64 rng(12);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<cplx> lower(4), raise(4);
    for (std::size_t i = 0; i < 4; ++i) {
        lower[i] = {n(rng), n(rng)};
        raise[i] = std::conj(lower[i]);
    }
    const std::size_t columns = 3;
    std::vector<cplx> in(layout.dim * columns);
    for (auto& a : in) a = {n(rng), n(rng)};
    std::vector<cplx> s(in.size()), p(in.size());
    serial::apply_fock_interaction(layout, lower, raise, in, s, columns);
    parallel::apply_fock_interaction(layout, lower, raise, in, p, columns);
    EXPECT_LT(max_diff(s, p), 1e-12);
}

TEST(Kernels, ForEachIndexCoversRange) {
    std::vector<int> hits(1000, 0);
    parallel::for_each_index(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) EXPECT_EQ(h, 1);
}
