#include "cavity/mbqc.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>

#include "cavity/effective.hpp"
#include "cavity/kernels.hpp"
#include "cavity/numfmt.hpp"

namespace cavity {

namespace {

using Vec2 = std::array<cplx, 2>;

int parity(OutcomeMask m) { return std::popcount(m) & 1; }

// Basis vector selected by outcome `bit`.
Vec2 eigenvector(Basis basis, double angle, int bit) {
    if (basis == Basis::Z) return bit == 0 ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
    const double h = 1.0 / std::sqrt(2.0);
    const cplx e = std::polar(h, angle);
    return bit == 0 ? Vec2{h, e} : Vec2{h, -e};
}

// amps <- |e><e|_site amps; returns the squared norm of the result.
double project(std::span<cplx> amps, int site, const Vec2& e) {
    const std::size_t half = amps.size() / 2;
    const std::size_t mask = std::size_t{1} << site;
    double prob = 0.0;
    for (std::size_t k = 0; k < half; ++k) {
        const std::size_t i0 = kernels::insert_zero_bit(k, site);
        const std::size_t i1 = i0 | mask;
        const cplx c = std::conj(e[0]) * amps[i0] + std::conj(e[1]) * amps[i1];
        amps[i0] = e[0] * c;
        amps[i1] = e[1] * c;
        prob += std::norm(c);
    }
    return prob;
}

// Contracts measured sites against their eigenvectors and applies output
// byproducts. `measured_vec[s]` is only read for sites that are not outputs.
std::vector<cplx> extract_output(std::span<const cplx> amps, const MeasurementPattern& pattern,
                                 const std::vector<Vec2>& measured_vec, OutcomeMask outcomes) {
    const int n = pattern.rows * pattern.cols;
    std::vector<int> output_slot(static_cast<std::size_t>(n), -1);
    for (std::size_t k = 0; k < pattern.outputs.size(); ++k) {
        output_slot[static_cast<std::size_t>(pattern.outputs[k].site)] = static_cast<int>(k);
    }
    std::vector<cplx> out(std::size_t{1} << pattern.outputs.size(), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (amps[i] == cplx{0.0, 0.0}) continue;
        cplx weight{1.0, 0.0};
        std::size_t o = 0;
        for (int s = 0; s < n; ++s) {
            const int b = static_cast<int>((i >> s) & 1U);
            const int slot = output_slot[static_cast<std::size_t>(s)];
            if (slot >= 0) {
                o |= static_cast<std::size_t>(b) << slot;
            } else {
                weight *= std::conj(measured_vec[static_cast<std::size_t>(s)][static_cast<std::size_t>(b)]);
            }
        }
        out[o] += weight * amps[i];
    }
    for (std::size_t k = 0; k < pattern.outputs.size(); ++k) {
        const std::size_t bit = std::size_t{1} << k;
        if (parity(pattern.outputs[k].x_mask & outcomes)) {
            for (std::size_t i = 0; i < out.size(); ++i) {
                if (!(i & bit)) std::swap(out[i], out[i | bit]);
            }
        }
        if (parity(pattern.outputs[k].z_mask & outcomes)) {
            for (std::size_t i = 0; i < out.size(); ++i) {
                if (i & bit) out[i] = -out[i];
            }
        }
    }
    return out;
}

void require_shape(const QubitRegister& reg, const MeasurementPattern& pattern) {
    if (reg.rows() != pattern.rows || reg.cols() != pattern.cols) {
        throw std::invalid_argument("register shape does not match the pattern lattice");
    }
}

}  // namespace

// ---------------------------------------------------------------------------

void MeasurementPattern::validate() const {
    const int n = rows * cols;
    if (rows < 1 || cols < 1 || n > QubitRegister::kMaxQubits) throw std::invalid_argument("pattern lattice out of range");
    if (steps.size() > 64) throw std::invalid_argument("patterns are limited to 64 steps");
    std::vector<int> role(static_cast<std::size_t>(n), 0);  // 1 measured, 2 output
    const auto check_site = [&](int s, const char* what) {
        if (s < 0 || s >= n) throw std::invalid_argument(std::string(what) + " site outside the lattice");
    };
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const MeasurementStep& step = steps[i];
        check_site(step.site, "measured");
        if (role[static_cast<std::size_t>(step.site)] != 0) {
            throw std::invalid_argument("site " + std::to_string(step.site) + " is measured more than once");
        }
        role[static_cast<std::size_t>(step.site)] = 1;
        const OutcomeMask earlier = i == 0 ? 0 : (i >= 64 ? ~OutcomeMask{0} : (OutcomeMask{1} << i) - 1);
        if ((step.s_mask | step.t_mask) & ~earlier) {
            throw std::invalid_argument("step " + std::to_string(i) + " adapts on a step that is not earlier");
        }
    }
    const OutcomeMask all = steps.size() >= 64 ? ~OutcomeMask{0} : (OutcomeMask{1} << steps.size()) - 1;
    for (const OutputSite& out : outputs) {
        check_site(out.site, "output");
        if (role[static_cast<std::size_t>(out.site)] != 0) {
            throw std::invalid_argument("output site " + std::to_string(out.site) + " is measured or repeated");
        }
        role[static_cast<std::size_t>(out.site)] = 2;
        if ((out.x_mask | out.z_mask) & ~all) throw std::invalid_argument("output byproduct references a missing step");
    }
    for (int s = 0; s < n; ++s) {
        if (role[static_cast<std::size_t>(s)] == 0) {
            throw std::invalid_argument("site " + std::to_string(s) + " is neither measured nor an output");
        }
    }
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int s : inputs) {
        check_site(s, "input");
        if (seen[static_cast<std::size_t>(s)]) throw std::invalid_argument("input site repeated");
        seen[static_cast<std::size_t>(s)] = true;
    }
}

double adapted_angle(const MeasurementStep& step, OutcomeMask outcomes) {
    double a = parity(step.s_mask & outcomes) ? -step.angle : step.angle;
    if (parity(step.t_mask & outcomes)) a += std::numbers::pi;
    return a;
}

OutcomeMask MeasurementRecord::mask() const {
    OutcomeMask m = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes[i] == -1) m |= OutcomeMask{1} << i;
    }
    return m;
}

MeasurementResult measure_qubit(MeasurementSession& session, int site, Basis basis, double angle,
                                std::optional<int> forced, std::mt19937_64* rng) {
    if (site < 0 || site >= session.state.qubits()) throw std::out_of_range("measured site outside the register");
    if (session.measured & (1U << site)) {
        throw std::domain_error("site " + std::to_string(site) + " has already been measured");
    }
    if (forced && *forced != 0 && *forced != 1) throw std::invalid_argument("forced outcome must be 0 or 1");
    if (!forced && rng == nullptr) throw std::invalid_argument("a random generator is needed without a forced outcome");

    std::vector<cplx> trial(session.state.amplitudes().begin(), session.state.amplitudes().end());
    const double p0 = project(trial, site, eigenvector(basis, angle, 0));
    int bit = 0;
    if (forced) {
        bit = *forced;
    } else {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        bit = u(*rng) < p0 ? 0 : 1;
    }
    double prob = p0;
    if (bit == 1) {
        trial.assign(session.state.amplitudes().begin(), session.state.amplitudes().end());
        prob = project(trial, site, eigenvector(basis, angle, 1));
    }
    if (prob < 1e-14) throw std::domain_error("forced measurement branch has zero probability");
    const double scale = 1.0 / std::sqrt(prob);
    auto amps = session.state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) amps[i] = trial[i] * scale;
    session.measured |= 1U << site;
    return {bit, prob};
}

PatternResult run_pattern(MeasurementSession& session, const MeasurementPattern& pattern,
                          const std::vector<int>& forced, std::uint64_t seed) {
    pattern.validate();
    require_shape(session.state, pattern);
    if (!forced.empty() && forced.size() != pattern.steps.size()) {
        throw std::invalid_argument("forced outcomes must cover every step");
    }
    std::mt19937_64 rng(seed);
    PatternResult result;
    result.record.seed = seed;
    std::vector<Vec2> vec(static_cast<std::size_t>(session.state.qubits()), Vec2{1.0, 0.0});
    OutcomeMask outcomes = 0;
    for (std::size_t i = 0; i < pattern.steps.size(); ++i) {
        const MeasurementStep& step = pattern.steps[i];
        const double angle = step.basis == Basis::XY ? adapted_angle(step, outcomes) : 0.0;
        const std::optional<int> f = forced.empty() ? std::nullopt : std::optional<int>(forced[i]);
        const MeasurementResult m = measure_qubit(session, step.site, step.basis, angle, f, &rng);
        if (m.bit) outcomes |= OutcomeMask{1} << i;
        vec[static_cast<std::size_t>(step.site)] = eigenvector(step.basis, angle, m.bit);
        result.record.outcomes.push_back(m.eigenvalue());
        result.probability *= m.probability;
    }
    result.output = extract_output(session.state.amplitudes(), pattern, vec, outcomes);
    return result;
}

QubitRegister encoded_cluster(const MeasurementPattern& pattern, std::size_t input_index, ClusterSource source) {
    const int n = pattern.rows * pattern.cols;
    if (input_index >= (std::size_t{1} << pattern.inputs.size())) throw std::out_of_range("logical input index");
    const double h = 1.0 / std::sqrt(2.0);
    std::vector<SingleQubitState> sites(static_cast<std::size_t>(n));
    if (source == ClusterSource::reference) {
        std::fill(sites.begin(), sites.end(), SingleQubitState{h, h});
        for (std::size_t k = 0; k < pattern.inputs.size(); ++k) {
            const bool one = (input_index >> k) & 1U;
            sites[static_cast<std::size_t>(pattern.inputs[k])] = one ? SingleQubitState{0.0, 1.0} : SingleQubitState{1.0, 0.0};
        }
        return graph_state(pattern.rows, pattern.cols, pattern.periodic, sites);
    }
    if (!pattern.periodic) throw std::invalid_argument("generated clusters have periodic boundaries");
    std::fill(sites.begin(), sites.end(), SingleQubitState{1.0, 0.0});
    for (std::size_t k = 0; k < pattern.inputs.size(); ++k) {
        const bool one = (input_index >> k) & 1U;
        sites[static_cast<std::size_t>(pattern.inputs[k])] = one ? SingleQubitState{h, -h} : SingleQubitState{h, h};
    }
    QubitRegister reg = product_state(pattern.rows, pattern.cols, sites);
    apply_pairwise_xx(reg, PhaseShiftTable::nearest_neighbor(pattern.rows, pattern.cols, std::numbers::pi / 4), true);
    apply_cluster_correction(reg, true);
    return reg;
}

Eigen::MatrixXcd branch_map(const MeasurementPattern& pattern, OutcomeMask outcomes, ClusterSource source) {
    pattern.validate();
    const std::size_t in_dim = std::size_t{1} << pattern.inputs.size();
    const std::size_t out_dim = std::size_t{1} << pattern.outputs.size();
    Eigen::MatrixXcd map(static_cast<Eigen::Index>(out_dim), static_cast<Eigen::Index>(in_dim));
    std::vector<Vec2> vec(static_cast<std::size_t>(pattern.rows * pattern.cols), Vec2{1.0, 0.0});
    for (std::size_t i = 0; i < pattern.steps.size(); ++i) {
        const MeasurementStep& step = pattern.steps[i];
        const double angle = step.basis == Basis::XY ? adapted_angle(step, outcomes) : 0.0;
        vec[static_cast<std::size_t>(step.site)] = eigenvector(step.basis, angle, static_cast<int>((outcomes >> i) & 1U));
    }
    for (std::size_t j = 0; j < in_dim; ++j) {
        QubitRegister reg = encoded_cluster(pattern, j, source);
        for (const MeasurementStep& step : pattern.steps) {
            project(reg.amplitudes(), step.site, vec[static_cast<std::size_t>(step.site)]);
        }
        const auto out = extract_output(reg.amplitudes(), pattern, vec, outcomes);
        for (std::size_t r = 0; r < out_dim; ++r) map(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = out[r];
    }
    return map;
}

double distance_up_to_phase(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("maps have different shapes");
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) return std::numeric_limits<double>::infinity();
    const double scale = std::sqrt(static_cast<double>(a.cols()));
    const Eigen::MatrixXcd an = a * (scale / na);
    const Eigen::MatrixXcd bn = b * (scale / nb);
    const cplx overlap = (bn.adjoint() * an).trace();
    const cplx phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx{1.0, 0.0};
    return (an - phase * bn).cwiseAbs().maxCoeff();
}

BranchReport enumerate_branches(const MeasurementPattern& pattern, const Eigen::MatrixXcd& target,
                                ClusterSource source) {
    pattern.validate();
    if (pattern.steps.size() > 20) throw std::invalid_argument("too many measured sites for exhaustive enumeration");
    const std::size_t count = std::size_t{1} << pattern.steps.size();
    const double in_dim = static_cast<double>(std::size_t{1} << pattern.inputs.size());
    std::vector<double> prob(count, 0.0);
    std::vector<double> dev(count, 0.0);
    std::vector<std::exception_ptr> failure(count);
    kernels::parallel::for_each_index(count, [&](std::size_t b) {
        try {
            const Eigen::MatrixXcd k = branch_map(pattern, b, source);
            prob[b] = k.squaredNorm() / in_dim;
            dev[b] = distance_up_to_phase(k, target);
        } catch (...) {
            failure[b] = std::current_exception();
        }
    });
    for (const auto& f : failure) {
        if (f) std::rethrow_exception(f);
    }
    BranchReport report;
    report.branches = count;
    for (std::size_t b = 0; b < count; ++b) {
        report.probability_sum += prob[b];
        report.max_deviation = std::max(report.max_deviation, dev[b]);
        report.min_probability = std::min(report.min_probability, prob[b]);
        report.max_probability = std::max(report.max_probability, prob[b]);
    }
    return report;
}

namespace {

// Pauli string as a dense matrix; letter of qubit q is (code >> 2q) & 3 with
// 0 = I, 1 = X, 2 = Y, 3 = Z.
Eigen::MatrixXcd pauli_matrix(int qubits, std::size_t code) {
    const auto dim = static_cast<Eigen::Index>(1) << qubits;
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        Eigen::Index row = col;
        cplx v{1.0, 0.0};
        for (int q = 0; q < qubits; ++q) {
            const auto letter = (code >> (2 * q)) & 3U;
            const bool bit = (col >> q) & 1;
            if (letter == 1 || letter == 2) row ^= Eigen::Index{1} << q;
            if (letter == 2) v *= bit ? cplx{0.0, -1.0} : cplx{0.0, 1.0};
            if (letter == 3 && bit) v = -v;
        }
        p(row, col) = v;
    }
    return p;
}

// True when m is proportional to a single Pauli string.
bool is_pauli_multiple(const Eigen::MatrixXcd& m, int qubits, double tol) {
    const double dim = static_cast<double>(m.rows());
    const double scale = m.norm() / std::sqrt(dim);
    if (scale == 0.0) return false;
    for (std::size_t code = 0; code < (std::size_t{1} << (2 * qubits)); ++code) {
        const cplx overlap = (pauli_matrix(qubits, code).adjoint() * m).trace() / (dim * scale);
        if (std::abs(std::abs(overlap) - 1.0) < tol) return true;
    }
    return false;
}

}  // namespace

UnitaryClass classify_unitary(const Eigen::MatrixXcd& u, double tol) {
    if (u.rows() != u.cols() || u.rows() < 2 || (u.rows() & (u.rows() - 1)) != 0) {
        throw std::invalid_argument("classify_unitary needs a square matrix of size 2^n");
    }
    const int qubits = std::countr_zero(static_cast<std::size_t>(u.rows()));
    if (qubits > 4) throw std::invalid_argument("classify_unitary handles at most 4 qubits");
    const auto dim = u.rows();
    if (distance_up_to_phase(u, Eigen::MatrixXcd::Identity(dim, dim)) < tol) return UnitaryClass::identity;
    if (is_pauli_multiple(u, qubits, tol)) return UnitaryClass::pauli;
    for (int q = 0; q < qubits; ++q) {
        for (std::size_t letter : {std::size_t{1}, std::size_t{3}}) {
            const Eigen::MatrixXcd p = pauli_matrix(qubits, letter << (2 * q));
            if (!is_pauli_multiple(u * p * u.adjoint(), qubits, tol)) return UnitaryClass::general;
        }
    }
    return UnitaryClass::clifford;
}

const char* to_string(UnitaryClass c) {
    switch (c) {
        case UnitaryClass::identity: return "identity";
        case UnitaryClass::pauli: return "pauli";
        case UnitaryClass::clifford: return "clifford";
        case UnitaryClass::general: return "non-clifford";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------

PatternBuilder::PatternBuilder(int rows, int cols, bool periodic) {
    pattern_.rows = rows;
    pattern_.cols = cols;
    pattern_.periodic = periodic;
    if (rows < 1 || cols < 1 || rows * cols > QubitRegister::kMaxQubits) {
        throw std::invalid_argument("pattern lattice out of range");
    }
    const auto n = static_cast<std::size_t>(rows * cols);
    adjacency_.assign(n, std::vector<bool>(n, false));
    for (const auto& [a, b] : lattice_edges(rows, cols, periodic)) {
        adjacency_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
        adjacency_[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = true;
    }
    live_.assign(n, true);
    x_frame_.assign(n, 0);
    z_frame_.assign(n, 0);
}

bool PatternBuilder::adjacent(int a, int b) const {
    return adjacency_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
}

PatternBuilder& PatternBuilder::input(int site) {
    if (site < 0 || site >= site_count()) throw std::invalid_argument("input site outside the lattice");
    pattern_.inputs.push_back(site);
    return *this;
}

PatternBuilder& PatternBuilder::cut(int site) {
    if (site < 0 || site >= site_count() || !live_[static_cast<std::size_t>(site)]) {
        throw std::invalid_argument("cut site is not a live vertex");
    }
    const OutcomeMask bit = OutcomeMask{1} << pattern_.steps.size();
    pattern_.steps.push_back({site, Basis::Z, 0.0, 0, 0});
    const auto v = static_cast<std::size_t>(site);
    for (int w = 0; w < site_count(); ++w) {
        const auto wi = static_cast<std::size_t>(w);
        if (live_[wi] && adjacent(site, w)) {
            z_frame_[wi] ^= bit ^ x_frame_[v];
            adjacency_[v][wi] = adjacency_[wi][v] = false;
        }
    }
    live_[v] = false;
    return *this;
}

PatternBuilder& PatternBuilder::teleport(int from, int to, double alpha) {
    if (from < 0 || from >= site_count() || to < 0 || to >= site_count()) {
        throw std::invalid_argument("teleport site outside the lattice");
    }
    const auto m = static_cast<std::size_t>(from);
    const auto o = static_cast<std::size_t>(to);
    if (!live_[m] || !live_[o] || !adjacent(from, to)) throw std::invalid_argument("teleport needs two adjacent live sites");
    const OutcomeMask bit = OutcomeMask{1} << pattern_.steps.size();
    pattern_.steps.push_back({from, Basis::XY, -alpha, x_frame_[m], z_frame_[m]});
    x_frame_[o] ^= bit;
    for (int w = 0; w < site_count(); ++w) {
        const auto wi = static_cast<std::size_t>(w);
        if (w != from && live_[wi] && adjacent(to, w)) z_frame_[wi] ^= bit;
    }
    for (int w = 0; w < site_count(); ++w) {
        const auto wi = static_cast<std::size_t>(w);
        adjacency_[m][wi] = adjacency_[wi][m] = false;
    }
    live_[m] = false;
    return *this;
}

PatternBuilder& PatternBuilder::output(int site) {
    if (site < 0 || site >= site_count() || !live_[static_cast<std::size_t>(site)]) {
        throw std::invalid_argument("output site is not a live vertex");
    }
    pattern_.outputs.push_back({site, x_frame_[static_cast<std::size_t>(site)], z_frame_[static_cast<std::size_t>(site)]});
    return *this;
}

MeasurementPattern PatternBuilder::build() const {
    pattern_.validate();
    return pattern_;
}

Eigen::Matrix2cd j_gate(double alpha) {
    const double h = 1.0 / std::sqrt(2.0);
    const cplx e = std::polar(1.0, alpha);
    Eigen::Matrix2cd j;
    j << h, h * e, h, -h * e;
    return j;
}

MeasurementPattern wire_pattern(const std::vector<double>& alphas) {
    if (alphas.empty()) throw std::invalid_argument("wire needs at least one angle");
    const int k = static_cast<int>(alphas.size());
    PatternBuilder b(1, k + 2, true);
    b.input(0).cut(k + 1);
    for (int i = 0; i < k; ++i) b.teleport(i, i + 1, alphas[static_cast<std::size_t>(i)]);
    return b.output(k).build();
}

MeasurementPattern wire_rotation_pattern(double theta1, double theta2, double theta3) {
    return wire_pattern({0.0, theta1, theta2, theta3});
}

Eigen::Matrix2cd wire_rotation_unitary(double theta1, double theta2, double theta3) {
    return j_gate(theta3) * j_gate(theta2) * j_gate(theta1) * j_gate(0.0);
}

MeasurementPattern cnot_pattern() {
    constexpr int rows = 3;
    constexpr int cols = 4;
    const auto site = [](int m, int n) { return m * cols + n; };
    const int control = site(0, 1);
    const std::array<int, 3> target{site(1, 0), site(1, 1), site(1, 2)};
    PatternBuilder b(rows, cols, true);
    b.input(control).input(target[0]);
    for (int s = 0; s < rows * cols; ++s) {
        if (s != control && std::find(target.begin(), target.end(), s) == target.end()) b.cut(s);
    }
    b.teleport(target[0], target[1], 0.0).teleport(target[1], target[2], 0.0);
    return b.output(control).output(target[2]).build();
}

Eigen::Matrix4cd cnot_unitary() {
    // index = control + 2 target
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
    u(0, 0) = 1.0;
    u(3, 1) = 1.0;
    u(2, 2) = 1.0;
    u(1, 3) = 1.0;
    return u;
}

// ---------------------------------------------------------------------------

PatternParseError::PatternParseError(int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct Token {
    std::string_view text;
    int column = 0;
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i >= line.size()) break;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return tokens;
}

class LineParser {
public:
    explicit LineParser(int line) : line_(line) {}

    [[noreturn]] void fail(const Token& t, const std::string& msg) const { throw PatternParseError(line_, t.column, msg); }

    int integer(const Token& t) const {
        const auto v = parse_integer(t.text);
        if (!v || *v < -1000000 || *v > 1000000) fail(t, "expected an integer, got '" + std::string(t.text) + "'");
        return static_cast<int>(*v);
    }

    double angle(const Token& t) const {
        std::string_view s = t.text;
        double factor = 1.0;
        if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
            factor = std::numbers::pi;
            s.remove_suffix(2);
            if (s.empty() || s == "+") return factor;
            if (s == "-") return -factor;
        }
        const auto v = parse_double(s);
        if (!v || !std::isfinite(*v)) fail(t, "expected an angle, got '" + std::string(t.text) + "'");
        return *v * factor;
    }

    // "1+3" or "-"; step indices must be below `limit`.
    OutcomeMask mask(const Token& t, std::string_view list, std::size_t limit) const {
        if (list == "-" || list.empty()) return 0;
        OutcomeMask m = 0;
        std::size_t pos = 0;
        while (pos <= list.size()) {
            const std::size_t plus = list.find('+', pos);
            const std::string_view item = list.substr(pos, plus == std::string_view::npos ? list.npos : plus - pos);
            const auto v = parse_integer(item);
            if (!v || *v < 0 || *v >= 64) fail(t, "bad step index '" + std::string(item) + "'");
            if (static_cast<std::size_t>(*v) >= limit) {
                fail(t, "step index " + std::to_string(*v) + " does not refer to an earlier step");
            }
            m ^= OutcomeMask{1} << *v;
            if (plus == std::string_view::npos) break;
            pos = plus + 1;
        }
        return m;
    }

private:
    int line_;
};

std::string mask_text(OutcomeMask m) {
    if (m == 0) return "-";
    std::string s;
    for (int i = 0; i < 64; ++i) {
        if (m & (OutcomeMask{1} << i)) {
            if (!s.empty()) s += '+';
            s += std::to_string(i);
        }
    }
    return s;
}

}  // namespace

MeasurementPattern parse_pattern(std::string_view text) {
    MeasurementPattern pattern;
    bool have_lattice = false;
    std::vector<int> owner;  // 0 free, 1 measured, 2 output
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto tok = tokenize(line);
        if (tok.empty()) continue;
        const LineParser p(line_no);

        const auto site_of = [&](const Token& tm, const Token& tn) {
            const int m = p.integer(tm);
            const int n = p.integer(tn);
            if (m < 0 || m >= pattern.rows) p.fail(tm, "row outside the lattice");
            if (n < 0 || n >= pattern.cols) p.fail(tn, "column outside the lattice");
            return m * pattern.cols + n;
        };

        if (tok[0].text == "lattice") {
            if (have_lattice) p.fail(tok[0], "duplicate lattice directive");
            if (tok.size() != 4) p.fail(tok[0], "expected: lattice M N periodic|open");
            pattern.rows = p.integer(tok[1]);
            pattern.cols = p.integer(tok[2]);
            if (pattern.rows < 1 || pattern.cols < 1 || pattern.rows * pattern.cols > QubitRegister::kMaxQubits) {
                p.fail(tok[1], "lattice dimensions out of range");
            }
            if (tok[3].text == "periodic") {
                pattern.periodic = true;
            } else if (tok[3].text == "open") {
                pattern.periodic = false;
            } else {
                p.fail(tok[3], "expected 'periodic' or 'open'");
            }
            owner.assign(static_cast<std::size_t>(pattern.rows * pattern.cols), 0);
            have_lattice = true;
            continue;
        }
        if (!have_lattice) p.fail(tok[0], "the first directive must be 'lattice'");

        if (tok[0].text == "input") {
            if (tok.size() != 3) p.fail(tok[0], "expected: input m n");
            const int s = site_of(tok[1], tok[2]);
            if (std::find(pattern.inputs.begin(), pattern.inputs.end(), s) != pattern.inputs.end()) {
                p.fail(tok[1], "input site listed twice");
            }
            pattern.inputs.push_back(s);
        } else if (tok[0].text == "output") {
            if (tok.size() < 3 || tok.size() > 5) p.fail(tok[0], "expected: output m n [x=..] [z=..]");
            OutputSite out;
            out.site = site_of(tok[1], tok[2]);
            if (owner[static_cast<std::size_t>(out.site)] != 0) p.fail(tok[1], "site collision: output site already used");
            for (std::size_t i = 3; i < tok.size(); ++i) {
                const std::string_view t = tok[i].text;
                if (t.starts_with("x=")) {
                    out.x_mask = p.mask(tok[i], t.substr(2), pattern.steps.size());
                } else if (t.starts_with("z=")) {
                    out.z_mask = p.mask(tok[i], t.substr(2), pattern.steps.size());
                } else {
                    p.fail(tok[i], "expected x=<steps> or z=<steps>");
                }
            }
            owner[static_cast<std::size_t>(out.site)] = 2;
            pattern.outputs.push_back(out);
        } else {
            if (tok.size() != 5) p.fail(tok[0], "expected: m n basis angle adapt");
            if (pattern.steps.size() >= 64) p.fail(tok[0], "more than 64 steps");
            MeasurementStep step;
            step.site = site_of(tok[0], tok[1]);
            if (owner[static_cast<std::size_t>(step.site)] != 0) p.fail(tok[0], "site collision: site already used");
            const std::string_view basis = tok[2].text;
            if (basis == "Z") {
                step.basis = Basis::Z;
                if (tok[3].text != "-" && p.angle(tok[3]) != 0.0) p.fail(tok[3], "Z measurements take no angle");
            } else if (basis == "X") {
                step.basis = Basis::XY;
                if (tok[3].text != "-" && p.angle(tok[3]) != 0.0) p.fail(tok[3], "X measurements take angle 0");
            } else if (basis == "XY") {
                step.basis = Basis::XY;
                step.angle = p.angle(tok[3]);
            } else {
                p.fail(tok[2], "unknown basis '" + std::string(basis) + "' (expected X, XY or Z)");
            }
            const std::string_view adapt = tok[4].text;
            if (adapt != "-") {
                std::size_t start = 0;
                while (start <= adapt.size()) {
                    const std::size_t semi = adapt.find(';', start);
                    const std::string_view part =
                        adapt.substr(start, semi == std::string_view::npos ? adapt.npos : semi - start);
                    if (part.starts_with("s=")) {
                        step.s_mask = p.mask(tok[4], part.substr(2), pattern.steps.size());
                    } else if (part.starts_with("t=")) {
                        step.t_mask = p.mask(tok[4], part.substr(2), pattern.steps.size());
                    } else {
                        p.fail(tok[4], "adaptation must be '-' or s=..;t=..");
                    }
                    if (semi == std::string_view::npos) break;
                    start = semi + 1;
                }
                if (step.basis == Basis::Z && (step.s_mask | step.t_mask)) p.fail(tok[4], "Z measurements are not adapted");
            }
            owner[static_cast<std::size_t>(step.site)] = 1;
            pattern.steps.push_back(step);
        }
    }
    if (!have_lattice) throw PatternParseError(line_no, 1, "missing lattice directive");
    try {
        pattern.validate();
    } catch (const std::invalid_argument& e) {
        throw PatternParseError(line_no, 1, e.what());
    }
    return pattern;
}

std::string format_pattern(const MeasurementPattern& pattern) {
    std::ostringstream out;
    const auto mn = [&](int s) { return std::to_string(s / pattern.cols) + " " + std::to_string(s % pattern.cols); };
    out << "lattice " << pattern.rows << ' ' << pattern.cols << ' ' << (pattern.periodic ? "periodic" : "open") << '\n';
    for (int s : pattern.inputs) out << "input " << mn(s) << '\n';
    for (const MeasurementStep& step : pattern.steps) {
        out << mn(step.site) << ' ';
        if (step.basis == Basis::Z) {
            out << "Z 0 -";
        } else {
            out << "XY " << shortest(step.angle == 0.0 ? 0.0 : step.angle) << ' ';
            if (step.s_mask == 0 && step.t_mask == 0) {
                out << '-';
            } else {
                out << "s=" << mask_text(step.s_mask) << ";t=" << mask_text(step.t_mask);
            }
        }
        out << '\n';
    }
    for (const OutputSite& o : pattern.outputs) {
        out << "output " << mn(o.site) << " x=" << mask_text(o.x_mask) << " z=" << mask_text(o.z_mask) << '\n';
    }
    return out.str();
}

}  // namespace cavity
