#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cavity/effective.hpp"
#include "cavity/mbqc.hpp"

using namespace cavity;

namespace {

constexpr double kPi = std::numbers::pi;
const double kR = 1.0 / std::sqrt(2.0);

Eigen::Matrix2cd hadamard() { return (Eigen::Matrix2cd() << kR, kR, kR, -kR).finished(); }

// Up-to-phase distance between two normalised state vectors.
double state_distance(const std::vector<cplx>& a, const Eigen::VectorXcd& b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b(static_cast<Eigen::Index>(i));
    return 1.0 - std::abs(s);
}

double entropy_bits(const Eigen::Matrix2cd& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho);
    double s = 0.0;
    for (double p : {es.eigenvalues()(0), es.eigenvalues()(1)}) {
        if (p > 1e-15) s -= p * std::log2(p);
    }
    return s;
}

}  // namespace

TEST(Measure, EigenstateAndUnbiased) {
    std::mt19937_64 rng(3);
    MeasurementSession plus(product_state(1, 1, {{kR, kR}}));
    const MeasurementResult r = measure_qubit(plus, 0, Basis::XY, 0.0, std::nullopt, &rng);
    EXPECT_EQ(r.eigenvalue(), 1);
    EXPECT_NEAR(r.probability, 1.0, 1e-15);

    MeasurementSession up(product_state(1, 1, Spin::up));
    const MeasurementResult m = measure_qubit(up, 0, Basis::XY, 0.0, 1, nullptr);
    EXPECT_NEAR(m.probability, 0.5, 1e-15);
    EXPECT_NEAR(std::abs(up.state[1] + up.state[0]), 0.0, 1e-15);  // collapsed onto |-x>
}

TEST(Measure, Errors) {
    MeasurementSession s(product_state(1, 2, {{kR, kR}, {1.0, 0.0}}));
    EXPECT_THROW(measure_qubit(s, 0, Basis::XY, 0.0, 1, nullptr), std::domain_error);
    measure_qubit(s, 0, Basis::XY, 0.0, 0, nullptr);
    EXPECT_THROW(measure_qubit(s, 0, Basis::Z, 0.0, 0, nullptr), std::domain_error);
    EXPECT_THROW(measure_qubit(s, 1, Basis::Z, 0.0, std::nullopt, nullptr), std::invalid_argument);
}

TEST(Measure, ZDetachesClusterSite) {
    // Triangle graph: removing site 2 leaves the 0-1 edge, with Z on both
    // neighbours for outcome 1.
    for (int bit : {0, 1}) {
        MeasurementSession s(reference_cluster(1, 3, true));
        measure_qubit(s, 2, Basis::Z, 0.0, bit, nullptr);
        std::vector<cplx> expected(8, 0.0);
        for (std::size_t i = 0; i < 4; ++i) {
            const int a = static_cast<int>(i & 1);
            const int b = static_cast<int>(i >> 1);
            const double sign = ((a & b) ? -1.0 : 1.0) * ((bit && (a ^ b)) ? -1.0 : 1.0);
            expected[i | (static_cast<std::size_t>(bit) << 2)] = 0.5 * sign;
        }
        const QubitRegister want(1, 3, expected);
        EXPECT_NEAR(std::norm(overlap(want, s.state)), 1.0, 1e-14) << "bit " << bit;
    }
}

TEST(Pattern, EmptyPatternKeepsInput) {
    MeasurementPattern p;
    p.rows = 1;
    p.cols = 1;
    p.inputs = {0};
    p.outputs = {{0, 0, 0}};
    MeasurementSession s(product_state(1, 1, {{0.6, cplx(0.0, 0.8)}}));
    const PatternResult r = run_pattern(s, p);
    ASSERT_EQ(r.output.size(), 2u);
    EXPECT_NEAR(std::abs(r.output[0] - 0.6), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(r.output[1] - cplx(0.0, 0.8)), 0.0, 1e-15);
    EXPECT_TRUE(r.record.outcomes.empty());
}

TEST(Pattern, Validation) {
    MeasurementPattern p = wire_pattern({0.1});
    p.steps.push_back(p.steps.front());
    EXPECT_THROW(p.validate(), std::invalid_argument);
    MeasurementPattern q = wire_pattern({0.1});
    q.steps.back().s_mask = OutcomeMask{1} << q.steps.size();
    EXPECT_THROW(q.validate(), std::invalid_argument);
}

TEST(Pattern, AdaptedAngle) {
    const MeasurementStep step{0, Basis::XY, 0.3, 0b01, 0b10};
    EXPECT_DOUBLE_EQ(adapted_angle(step, 0b00), 0.3);
    EXPECT_DOUBLE_EQ(adapted_angle(step, 0b01), -0.3);
    EXPECT_DOUBLE_EQ(adapted_angle(step, 0b10), 0.3 + kPi);
    EXPECT_DOUBLE_EQ(adapted_angle(step, 0b11), -0.3 + kPi);
}

TEST(Pattern, TwoSiteHadamard) {
    const MeasurementPattern p = PatternBuilder(1, 2, true).input(0).teleport(0, 1, 0.0).output(1).build();
    for (ClusterSource src : {ClusterSource::reference, ClusterSource::generated}) {
        const BranchReport r = enumerate_branches(p, hadamard(), src);
        EXPECT_EQ(r.branches, 2u);
        EXPECT_NEAR(r.probability_sum, 1.0, 1e-12);
        EXPECT_LT(r.max_deviation, 1e-12);
    }
    // Sampled run on logical |1>: output H|1> = |->.
    MeasurementSession s(encoded_cluster(p, 1, ClusterSource::reference));
    const PatternResult r = run_pattern(s, p, {}, 17);
    EXPECT_LT(state_distance(r.output, Eigen::Vector2cd(kR, -kR)), 1e-12);
}

TEST(Wire, ZeroAnglesIdentity) {
    const Eigen::Matrix2cd u = wire_rotation_unitary(0.0, 0.0, 0.0);
    EXPECT_EQ(classify_unitary(u), UnitaryClass::identity);
    const MeasurementPattern p = wire_rotation_pattern(0.0, 0.0, 0.0);
    const Eigen::MatrixXcd m = branch_map(p, 0b10110, ClusterSource::reference);
    EXPECT_EQ(classify_unitary(m / std::sqrt((m.adjoint() * m)(0, 0).real())), UnitaryClass::identity);
}

TEST(Wire, RandomAnglesEveryBranch) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int trial = 0; trial < 3; ++trial) {
        const double a = u(rng), b = u(rng), c = u(rng);
        const BranchReport r =
            enumerate_branches(wire_rotation_pattern(a, b, c), wire_rotation_unitary(a, b, c), ClusterSource::reference);
        EXPECT_EQ(r.branches, 32u);
        EXPECT_NEAR(r.probability_sum, 1.0, 1e-12);
        EXPECT_LT(r.max_deviation, 1e-10);
    }
}

TEST(Wire, CompositionOfRotations) {
    const double t[3] = {0.4, -1.1, 2.0};
    const double s[3] = {-0.7, 0.25, 1.3};
    const MeasurementPattern p = wire_pattern({0.0, t[0], t[1], t[2], 0.0, s[0], s[1], s[2]});
    EXPECT_EQ(p.cols, 10);
    const Eigen::Matrix2cd target = wire_rotation_unitary(s[0], s[1], s[2]) * wire_rotation_unitary(t[0], t[1], t[2]);
    const BranchReport r = enumerate_branches(p, target, ClusterSource::reference);
    EXPECT_EQ(r.branches, 512u);
    EXPECT_LT(r.max_deviation, 1e-10);
}

TEST(Wire, GeneratedClusterAgrees) {
    const BranchReport r = enumerate_branches(wire_rotation_pattern(0.3, 0.9, -0.4),
                                              wire_rotation_unitary(0.3, 0.9, -0.4), ClusterSource::generated);
    EXPECT_LT(r.max_deviation, 1e-10);
}

TEST(Cnot, BasisInputs) {
    const MeasurementPattern p = cnot_pattern();
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 3; ++trial) {
        const std::uint64_t seed = rng();
        // index = control + 2 target; |00> -> |00>, |c=1,t=0> -> |11>.
        MeasurementSession zero(encoded_cluster(p, 0, ClusterSource::reference));
        EXPECT_NEAR(std::norm(run_pattern(zero, p, {}, seed).output[0]), 1.0, 1e-10);
        MeasurementSession one(encoded_cluster(p, 1, ClusterSource::reference));
        EXPECT_NEAR(std::norm(run_pattern(one, p, {}, seed).output[3]), 1.0, 1e-10);
    }
}

TEST(Cnot, MakesBellState) {
    const MeasurementPattern p = cnot_pattern();
    Eigen::Vector4cd in(kR, kR, 0.0, 0.0);  // |+> control, |0> target
    const Eigen::Vector4cd bell(kR, 0.0, 0.0, kR);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 4; ++trial) {
        const OutcomeMask outcomes = rng() & ((OutcomeMask{1} << p.steps.size()) - 1);
        Eigen::VectorXcd out = branch_map(p, outcomes, ClusterSource::reference) * in;
        out.normalize();
        EXPECT_NEAR(std::abs(bell.dot(out)), 1.0, 1e-10);
        Eigen::Matrix2cd rho;
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) rho(a, b) = out(a) * std::conj(out(b)) + out(a + 2) * std::conj(out(b + 2));
        }
        EXPECT_NEAR(entropy_bits(rho), 1.0, 1e-10);
    }
}

TEST(Cnot, AllBranches) {
    const BranchReport r = enumerate_branches(cnot_pattern(), cnot_unitary(), ClusterSource::reference);
    EXPECT_EQ(r.branches, 1024u);
    EXPECT_NEAR(r.probability_sum, 1.0, 1e-10);
    EXPECT_LT(r.max_deviation, 1e-10);
}

TEST(Classify, KnownGates) {
    EXPECT_EQ(classify_unitary(Eigen::Matrix2cd::Identity() * std::polar(1.0, 0.3)), UnitaryClass::identity);
    EXPECT_EQ(classify_unitary((Eigen::Matrix2cd() << 0, 1, 1, 0).finished()), UnitaryClass::pauli);
    EXPECT_EQ(classify_unitary(hadamard()), UnitaryClass::clifford);
    EXPECT_EQ(classify_unitary(j_gate(kPi / 4)), UnitaryClass::general);
    EXPECT_EQ(classify_unitary(cnot_unitary()), UnitaryClass::clifford);
    EXPECT_STREQ(to_string(UnitaryClass::general), "non-clifford");
}

TEST(Parser, RoundTrip) {
    for (const MeasurementPattern& p : {cnot_pattern(), wire_rotation_pattern(-kPi / 4, kPi / 3, 0.125)}) {
        const std::string text = format_pattern(p);
        const MeasurementPattern q = parse_pattern(text);
        EXPECT_EQ(format_pattern(q), text);
        ASSERT_EQ(q.steps.size(), p.steps.size());
        for (std::size_t i = 0; i < p.steps.size(); ++i) {
            EXPECT_EQ(q.steps[i].site, p.steps[i].site);
            EXPECT_EQ(q.steps[i].s_mask, p.steps[i].s_mask);
            EXPECT_EQ(q.steps[i].t_mask, p.steps[i].t_mask);
            EXPECT_NEAR(q.steps[i].angle, p.steps[i].angle, 1e-15);
        }
    }
}

TEST(Parser, Grammar) {
    const MeasurementPattern p = parse_pattern(
        "# comment\n"
        "lattice 1 3 periodic\n"
        "input 0 0\n"
        "0 2 Z 0 -\n"
        "0 0 XY 0.5pi t=0   # trailing comment\n"
        "output 0 1 x=1 z=0\n");
    EXPECT_EQ(p.cols, 3);
    ASSERT_EQ(p.steps.size(), 2u);
    EXPECT_EQ(p.steps[0].basis, Basis::Z);
    EXPECT_NEAR(p.steps[1].angle, kPi / 2, 1e-15);
    EXPECT_EQ(p.steps[1].t_mask, 1u);
    EXPECT_EQ(p.outputs[0].x_mask, 2u);
}

TEST(Parser, Errors) {
    const auto line_of = [](const std::string& text) {
        try {
            parse_pattern(text);
        } catch (const PatternParseError& e) {
            return e.line();
        }
        return -1;
    };
    EXPECT_EQ(line_of("input 0 0\n"), 1);
    EXPECT_EQ(line_of("lattice 1 3 periodic\ninput 0 0\n0 2 Q 0 -\n"), 3);
    EXPECT_EQ(line_of("lattice 1 3 periodic\ninput 0 0\n0 2 Z 0 s=5\n"), 3);
    EXPECT_EQ(line_of("lattice 1 3 periodic\ninput 0 0\n0 2 Z 0 -\n0 2 Z 0 -\n"), 4);
    EXPECT_EQ(line_of("lattice 1 3 periodic\ninput 0 0\n0 1 XY abc -\n"), 3);
}
