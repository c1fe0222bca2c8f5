#pragma once
// One-way computation on cluster states: adaptive single-qubit measurements
// with Pauli-frame feedforward.
//
// Conventions:
//  * Equatorial measurement at angle a projects onto (|0> +- e^{ia}|1>)/sqrt2;
//    outcome bit 0 (eigenvalue +1) is the "+" state. Z measurement: bit 0 is
//    |0> = |up>. X is the equatorial basis at a = 0.
//  * Teleporting a logical qubit from site m to a neighbour o while measuring
//    m at angle -a applies J(a) = H diag(1, e^{ia}) up to Pauli byproducts.
//  * Byproducts are tracked as a Pauli frame X^x Z^z on every live site;
//    equatorial angles are adapted as (-1)^{x} a + pi z, and output qubits
//    are corrected by applying X^x then Z^z.
//  * Logical qubit i of a pattern is bit i of the logical basis index, in the
//    order of the input (and output) lists.

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cavity/register.hpp"

namespace cavity {

enum class Basis { XY, Z };

/// Step-index bitmask (bit i = outcome of step i).
using OutcomeMask = std::uint64_t;

struct MeasurementStep {
    int site = 0;
    Basis basis = Basis::XY;
    double angle = 0.0;       // XY only
    OutcomeMask s_mask = 0;   // sign flip: (-1)^{parity(s_mask & outcomes)}
    OutcomeMask t_mask = 0;   // pi shift: pi parity(t_mask & outcomes)
};

struct OutputSite {
    int site = 0;
    OutcomeMask x_mask = 0;
    OutcomeMask z_mask = 0;
};

struct MeasurementPattern {
    int rows = 1;
    int cols = 1;
    bool periodic = true;
    std::vector<int> inputs;  // sites carrying the logical input
    std::vector<OutputSite> outputs;
    std::vector<MeasurementStep> steps;

    /// Throws std::invalid_argument on repeated sites, out-of-range sites,
    /// adaptation masks referencing non-earlier steps, more than 64 steps or
    /// measured outputs.
    void validate() const;
    int logical_inputs() const { return static_cast<int>(inputs.size()); }
    int logical_outputs() const { return static_cast<int>(outputs.size()); }
};

/// Angle actually measured given the outcomes so far.
double adapted_angle(const MeasurementStep& step, OutcomeMask outcomes);

struct MeasurementRecord {
    std::vector<int> outcomes;  // +1 or -1 per executed step
    std::uint64_t seed = 0;
    OutcomeMask mask() const;
};

/// Register plus the set of sites already measured.
struct MeasurementSession {
    QubitRegister state;
    std::uint32_t measured = 0;
    explicit MeasurementSession(QubitRegister reg) : state(std::move(reg)) {}
};

struct MeasurementResult {
    int bit = 0;              // 0 for eigenvalue +1, 1 for -1
    double probability = 0.0;
    int eigenvalue() const { return bit == 0 ? 1 : -1; }
};

/// Projective single-qubit measurement; the site is left in the observed
/// eigenstate and the register is renormalised. With `forced` the given
/// outcome bit is selected, otherwise it is drawn from `rng`. Throws
/// std::domain_error for a repeated site or a zero-probability forced branch.
MeasurementResult measure_qubit(MeasurementSession& session, int site, Basis basis, double angle,
                                std::optional<int> forced, std::mt19937_64* rng = nullptr);

struct PatternResult {
    /// Corrected state of the output sites, bit i = output i.
    std::vector<cplx> output;
    MeasurementRecord record;
    double probability = 1.0;  // of the branch that occurred
};

/// Runs every step with adaptation, then applies output byproducts and
/// returns the reduced state of the outputs. Throws std::invalid_argument if
/// the session and pattern shapes differ or `forced` has the wrong length.
PatternResult run_pattern(MeasurementSession& session, const MeasurementPattern& pattern,
                          const std::vector<int>& forced = {}, std::uint64_t seed = 0);

enum class ClusterSource { reference, generated };

/// Cluster for `pattern` with logical input basis state `input_index` on the
/// pattern's input sites. The generated source runs the nearest-neighbour
/// XX evolution at Gamma = pi/4 and the local correction; the reference
/// source builds the graph state directly.
QubitRegister encoded_cluster(const MeasurementPattern& pattern, std::size_t input_index, ClusterSource source);

/// Linear map (columns = logical basis inputs) realised by one outcome branch,
/// byproducts included, unnormalised.
Eigen::MatrixXcd branch_map(const MeasurementPattern& pattern, OutcomeMask outcomes, ClusterSource source);

struct BranchReport {
    std::size_t branches = 0;
    double probability_sum = 0.0;
    double max_deviation = 0.0;  // from the target map, up to global phase
    double min_probability = 1.0;
    double max_probability = 0.0;
};

/// Enumerates all 2^steps outcome branches (in parallel) and compares each
/// normalised branch map with `target`.
BranchReport enumerate_branches(const MeasurementPattern& pattern, const Eigen::MatrixXcd& target,
                                ClusterSource source);

/// max |A/|A| - e^{i phi} B/|B|| * sqrt(dim) with the best phi (Frobenius
/// normalisation).
double distance_up_to_phase(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

enum class UnitaryClass { identity, pauli, clifford, general };

/// Classifies a unitary on up to 4 qubits up to global phase (tolerance on
/// the normalised Pauli overlaps).
UnitaryClass classify_unitary(const Eigen::MatrixXcd& u, double tol = 1e-9);
const char* to_string(UnitaryClass c);

/// Builds patterns on an M x N grid graph by cutting vertices (Z
/// measurements) and teleporting logical qubits along edges, tracking the
/// Pauli frame.
class PatternBuilder {
public:
    PatternBuilder(int rows, int cols, bool periodic);

    PatternBuilder& input(int site);
    /// Z-measures `site` and removes it from the graph.
    PatternBuilder& cut(int site);
    /// Measures `from` so that J(alpha) acts on the logical qubit, which
    /// moves to the neighbour `to`.
    PatternBuilder& teleport(int from, int to, double alpha);
    /// Marks a live site as output, capturing its frame.
    PatternBuilder& output(int site);

    MeasurementPattern build() const;

private:
    bool adjacent(int a, int b) const;
    int site_count() const { return pattern_.rows * pattern_.cols; }

    MeasurementPattern pattern_;
    std::vector<std::vector<bool>> adjacency_;
    std::vector<bool> live_;
    std::vector<OutcomeMask> x_frame_;
    std::vector<OutcomeMask> z_frame_;
};

/// J(a) = H diag(1, e^{ia}).
Eigen::Matrix2cd j_gate(double alpha);

/// Wire on a periodic 1 x (k + 2) ring applying J(alphas[k-1]) ... J(alphas[0]).
MeasurementPattern wire_pattern(const std::vector<double>& alphas);
/// Wire for J(t3) J(t2) J(t1) J(0) = Rx(t3) P(t2) Rx(t1), with Rx(t) = H P(t) H.
MeasurementPattern wire_rotation_pattern(double theta1, double theta2, double theta3);
Eigen::Matrix2cd wire_rotation_unitary(double theta1, double theta2, double theta3);

/// CNOT on a periodic 3 x 4 patch: control enters and leaves at (0,1), the
/// target enters at (1,0) and leaves at (1,2). Logical bit 0 is the control.
MeasurementPattern cnot_pattern();
Eigen::Matrix4cd cnot_unitary();

class PatternParseError : public std::runtime_error {
public:
    PatternParseError(int line, int column, const std::string& message);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

MeasurementPattern parse_pattern(std::string_view text);
std::string format_pattern(const MeasurementPattern& pattern);

}  // namespace cavity
