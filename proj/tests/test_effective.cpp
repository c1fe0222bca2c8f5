#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cavity/effective.hpp"
#include "cavity/kernels.hpp"

using namespace cavity;

namespace {

constexpr double kPi = std::numbers::pi;

QubitRegister xx_state(int rows, int cols) {
    QubitRegister reg = product_state(rows, cols, Spin::up);
    apply_pairwise_xx(reg, PhaseShiftTable::nearest_neighbor(rows, cols, kPi / 4), true);
    return reg;
}

// Test-side H on every qubit followed by exp(i phi Z) on every qubit, by
// explicit loops.
std::vector<cplx> hadamard_then_z(std::vector<cplx> v, int qubits, double phi) {
    for (int q = 0; q < qubits; ++q) {
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i & bit) continue;
            const cplx a = v[i];
            const cplx b = v[i | bit];
            v[i] = (a + b) / std::sqrt(2.0);
            v[i | bit] = (a - b) / std::sqrt(2.0);
        }
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        const int ones = std::popcount(i);
        v[i] *= std::polar(1.0, phi * (qubits - 2 * ones));
    }
    return v;
}

double fidelity(const std::vector<cplx>& a, std::span<const cplx> b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return std::norm(s);
}

// Searches phi over multiples of pi/16; returns the best phi mod pi.
double best_correction_angle(int rows, int cols) {
    const QubitRegister gen = xx_state(rows, cols);
    const QubitRegister ref = reference_cluster(rows, cols, true);
    const std::vector<cplx> g(gen.amplitudes().begin(), gen.amplitudes().end());
    double best = -1.0;
    double best_phi = 0.0;
    for (int j = 0; j < 16; ++j) {
        const double phi = kPi * j / 16;
        const double f = fidelity(hadamard_then_z(g, rows * cols, phi), ref.amplitudes());
        if (f > best) {
            best = f;
            best_phi = phi;
        }
    }
    EXPECT_NEAR(best, 1.0, 1e-12);
    return best_phi;
}

double mod_pi(double x) { return x - kPi * std::floor(x / kPi + 1e-12); }

}  // namespace

TEST(ProductState, Basics) {
    const QubitRegister one = product_state(1, 1, Spin::up);
    EXPECT_EQ(one[0], cplx(1.0, 0.0));
    EXPECT_EQ(one[1], cplx(0.0, 0.0));
    EXPECT_EQ(product_state(2, 1, Spin::up)[0], cplx(1.0, 0.0));
    EXPECT_EQ(overlap(product_state(2, 2, Spin::up), product_state(2, 2, Spin::down)), cplx(0.0, 0.0));
    const double r = 1.0 / std::sqrt(2.0);
    const QubitRegister plus = product_state(1, 2, {{r, r}, {1.0, 0.0}});
    EXPECT_NEAR(plus[1].real(), r, 1e-15);
    EXPECT_THROW(product_state(1, 2, {{1.0, 0.0}}), std::invalid_argument);
}

TEST(PairwiseXX, ZeroTableLeavesState) {
    QubitRegister reg = product_state(2, 3, Spin::up);
    apply_pairwise_xx(reg, PhaseShiftTable::nearest_neighbor(2, 3, 0.0), false);
    EXPECT_EQ(reg[0], cplx(1.0, 0.0));
}

TEST(PairwiseXX, HalfPiFlipsPair) {
    QubitRegister reg = product_state(1, 2, Spin::up);
    apply_pairwise_xx(reg, PhaseShiftTable::nearest_neighbor(1, 2, kPi / 2), true);
    EXPECT_NEAR(std::abs(reg[3] - cplx(0.0, 1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(reg[0]), 0.0, 1e-15);
}

TEST(PairwiseXX, ShapeMismatch) {
    QubitRegister reg = product_state(2, 2, Spin::up);
    EXPECT_THROW(apply_pairwise_xx(reg, PhaseShiftTable::nearest_neighbor(1, 4, 0.1), true), std::invalid_argument);
}

TEST(PairwiseXX, OrderIndependent) {
    const PhaseShiftTable table = build_phase_table({3, 3, 1.0, 0.1, 0.0}, 1.3);
    auto pairs = interaction_pairs(table, false);
    EXPECT_EQ(pairs.size(), 36u);
    QubitRegister reg = product_state(3, 3, Spin::up);
    apply_pairwise_xx(reg, table, false, Execution::serial);
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 3; ++trial) {
        std::shuffle(pairs.begin(), pairs.end(), rng);
        QubitRegister other = product_state(3, 3, Spin::up);
        for (const auto& p : pairs) kernels::serial::apply_xx(other.amplitudes(), p.a, p.b, p.theta);
        EXPECT_NEAR(std::norm(overlap(reg, other)), 1.0, 1e-12);
    }
}

TEST(PairwiseXX, NearestNeighbourPairs) {
    const auto pairs = interaction_pairs(PhaseShiftTable::nearest_neighbor(2, 2, 0.5), true);
    EXPECT_EQ(pairs.size(), 4u);
    EXPECT_EQ(interaction_pairs(PhaseShiftTable::nearest_neighbor(3, 3, 0.5), true).size(), 18u);
    EXPECT_EQ(lattice_edges(3, 3, true).size(), 18u);
    EXPECT_EQ(lattice_edges(3, 3, false).size(), 12u);
    EXPECT_EQ(lattice_edges(2, 2, true).size(), 4u);
}

TEST(ClusterCorrection, AngleFromBruteForce) {
    // Uniform-degree rings: degree 1 (1x2), 2 (1x3), 4 (3x3).
    EXPECT_NEAR(mod_pi(best_correction_angle(1, 2)), mod_pi(cluster_correction_angle(1)), 1e-12);
    EXPECT_NEAR(mod_pi(best_correction_angle(1, 3)), mod_pi(cluster_correction_angle(2)), 1e-12);
    EXPECT_NEAR(mod_pi(best_correction_angle(3, 3)), mod_pi(cluster_correction_angle(4)), 1e-12);
}

TEST(ClusterCorrection, UndoRestores) {
    QubitRegister reg = xx_state(2, 3);
    const QubitRegister before = reg;
    apply_cluster_correction(reg, true);
    undo_cluster_correction(reg, true);
    EXPECT_NEAR(std::norm(overlap(before, reg)), 1.0, 1e-13);
}

TEST(ClusterFidelity, GeneratedStates) {
    for (const auto& [r, c] : {std::pair{1, 2}, {2, 2}, {2, 3}, {3, 3}, {3, 4}}) {
        EXPECT_NEAR(cluster_fidelity(xx_state(r, c), true), 1.0, 1e-10) << r << "x" << c;
    }
}

TEST(ClusterFidelity, ReferenceSelfFidelity) {
    QubitRegister ref = reference_cluster(3, 3, true);
    undo_cluster_correction(ref, true);
    EXPECT_NEAR(cluster_fidelity(ref, true), 1.0, 1e-12);
}

TEST(ClusterFidelity, NoInteractionIsNotACluster) {
    const QubitRegister reg = product_state(2, 2, Spin::up);
    const double f = cluster_fidelity(reg, true);
    EXPECT_LT(f, 1.0);
    EXPECT_GT(f, 0.0);
}

TEST(ClusterFidelity, PeriodicAndOpenDiffer) {
    // On a 2 x 2 grid the wrap edges coincide with the direct ones, so the
    // smallest lattice where the boundary matters is 3 x 3.
    EXPECT_NEAR(std::norm(overlap(reference_cluster(2, 2, true), reference_cluster(2, 2, false))), 1.0, 1e-14);
    EXPECT_LT(std::norm(overlap(reference_cluster(3, 3, true), reference_cluster(3, 3, false))), 1.0 - 1e-3);
}

TEST(ClusterFidelity, FullTableDeficit) {
    const LatticeConfig c{4, 4, 1.0, 0.1, 0.0};
    const PhaseShiftTable table = build_phase_table(c, solve_gate_time(c));
    QubitRegister full = product_state(4, 4, Spin::up);
    apply_pairwise_xx(full, table, false);
    QubitRegister nn = product_state(4, 4, Spin::up);
    apply_pairwise_xx(nn, table, true);
    const double deficit = 1.0 - cluster_fidelity(full, true);
    EXPECT_GT(deficit, 1e-4);
    EXPECT_LT(deficit, 0.02);
    EXPECT_NEAR(cluster_fidelity(nn, true), 1.0, 1e-10);
}

TEST(ReferenceCluster, TwoSites) {
    const QubitRegister r = reference_cluster(1, 2, true);
    EXPECT_NEAR(r[0].real(), 0.5, 1e-15);
    EXPECT_NEAR(r[1].real(), 0.5, 1e-15);
    EXPECT_NEAR(r[2].real(), 0.5, 1e-15);
    EXPECT_NEAR(r[3].real(), -0.5, 1e-15);
}

TEST(Stabilizers, Expectations) {
    const QubitRegister up = product_state(1, 3, Spin::up);
    EXPECT_NEAR(stabilizer_expectation(up, PauliString::parse("III")), 1.0, 1e-15);
    EXPECT_NEAR(stabilizer_expectation(up, PauliString::parse("IZI")), 1.0, 1e-15);
    EXPECT_NEAR(stabilizer_expectation(up, PauliString::parse("-IZI")), -1.0, 1e-15);
    EXPECT_THROW(stabilizer_expectation(up, PauliString::parse("ZZ")), std::invalid_argument);
    for (const auto& [r, c, p] : {std::tuple{2, 2, true}, {3, 3, true}, {3, 3, false}, {2, 4, false}}) {
        const QubitRegister cl = reference_cluster(r, c, p);
        for (int s = 0; s < r * c; ++s) {
            EXPECT_NEAR(stabilizer_expectation(cl, cluster_stabilizer(r, c, p, s)), 1.0, 1e-10);
        }
    }
}

TEST(ReducedState, Purity) {
    const Matrix2 rho = reduced_single_qubit(product_state(2, 2, Spin::up), 3);
    EXPECT_NEAR(rho[0][0].real(), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(rho[1][1]), 0.0, 1e-15);
    const QubitRegister gen = xx_state(2, 2);
    for (int s = 0; s < 4; ++s) {
        const Matrix2 r = reduced_single_qubit(gen, s);
        EXPECT_NEAR(std::abs(r[0][0] - 0.5), 0.0, 1e-10);
        EXPECT_NEAR(std::abs(r[0][1]), 0.0, 1e-10);
        EXPECT_NEAR(single_site_purity(reference_cluster(3, 3, true), s), 0.5, 1e-10);
    }
    EXPECT_NEAR(single_site_purity(product_state(2, 2, Spin::down), 1), 1.0, 1e-15);
}
