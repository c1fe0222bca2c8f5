#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <vector>

#include "cavity/effective.hpp"
#include "cavity/feasibility.hpp"
#include "cavity/mbqc.hpp"
#include "cavity/numfmt.hpp"
#include "cavity/oracle.hpp"

#ifndef CAVITY_VERSION
#define CAVITY_VERSION "0.0.0"
#endif

namespace cavity::cli {

namespace {

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string header(const RunConfig& config, const std::string& command) {
    std::ostringstream out;
    out << "# artifact " << CAVITY_VERSION << '\n';
    out << "# command " << command << '\n';
    for (const auto& [key, value] : config.resolved()) out << "# " << key << " = " << value << '\n';
    return out.str();
}

void write_file(const RunConfig& config, const std::string& name, const std::string& content) {
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    const std::filesystem::path path = std::filesystem::path(config.out_dir) / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write '" + path.string() + "'");
    out << content;
    out.close();
    if (!out) throw OutputError("error while writing '" + path.string() + "'");
}

Separation nearest_separation(const LatticeConfig& lattice) {
    return lattice.rows > 1 ? Separation{1, 0} : Separation{0, 1};
}

void maybe_write_feasibility(const RunConfig& config, const std::string& command, std::ostream& log) {
    if (!config.preset) return;
    const FeasibilityReport r = feasibility_report(preset_by_name(*config.preset), config.lattice);
    std::ostringstream out;
    out << header(config, command);
    out << "preset = " << r.preset << '\n';
    out << "tunneling_over_g = " << shortest(r.tunneling_over_g) << '\n';
    out << "g_tau = " << shortest(r.g_tau) << '\n';
    out << "loop_time_s = " << shortest(r.loop_time) << '\n';
    out << "preparation_time_s = " << shortest(r.preparation_time) << '\n';
    out << "ratio_cavity = " << shortest(r.ratio_cavity) << '\n';
    out << "ratio_qubit = " << shortest(r.ratio_qubit) << '\n';
    if (r.drive_ratio) out << "drive_ratio = " << shortest(*r.drive_ratio) << '\n';
    write_file(config, "feasibility.txt", out.str());
    log << "feasibility (" << r.preset << "): preparation time " << r.preparation_time * 1e6 << " us, "
        << "ratio to cavity lifetime " << r.ratio_cavity << '\n';
}

}  // namespace

int cmd_gamma_sweep(const RunConfig& config, std::ostream& log) {
    const std::vector<double> deltas = config.delta_grid.values();
    const std::vector<double> taus = config.tau_grid.values();
    if (deltas.empty()) throw ConfigError("the delta grid is empty");
    if (taus.empty()) throw ConfigError("the tau grid is empty");
    if (config.separations.empty()) throw ConfigError("no separations requested");
    const double g = config.lattice.coupling;
    if (!(g > 0.0)) throw ConfigError("gamma-sweep needs a positive coupling");

    std::vector<double> delta_abs;
    for (double d : deltas) delta_abs.push_back(d * g);
    std::vector<double> tau_abs;
    for (double t : taus) tau_abs.push_back(t / g);
    const double tau = config.sweep_tau / g;

    const auto delta_rows = sweep_delta(config.lattice, tau, delta_abs);
    const auto tau_rows = sweep_tau(config.lattice, tau_abs, config.separations);

    std::ostringstream d;
    d << header(config, "gamma-sweep");
    d << "delta_over_g,gamma_nn\n";
    for (std::size_t i = 0; i < delta_rows.size(); ++i) d << shortest(deltas[i]) << ',' << shortest(delta_rows[i].gamma_nn) << '\n';

    std::ostringstream t;
    t << header(config, "gamma-sweep");
    t << "g_tau";
    for (const Separation& s : config.separations) t << ",G_" << s.dm << '_' << s.dn;
    t << '\n';
    double distant_max = 0.0;
    for (std::size_t i = 0; i < tau_rows.size(); ++i) {
        t << shortest(taus[i]);
        for (std::size_t k = 0; k < config.separations.size(); ++k) {
            const double v = tau_rows[i].gamma[k];
            t << ',' << shortest(v);
            const Separation& s = config.separations[k];
            if (std::abs(s.dm) + std::abs(s.dn) >= 2) distant_max = std::max(distant_max, std::abs(v));
        }
        t << '\n';
    }
    write_file(config, "gamma_vs_delta.csv", d.str());
    write_file(config, "gamma_vs_tau.csv", t.str());
    maybe_write_feasibility(config, "gamma-sweep", log);

    log << "wrote " << delta_rows.size() << " detuning rows and " << tau_rows.size() << " time rows to "
        << config.out_dir << '\n';
    if (delta_rows.front().gamma_nn != 0.0) {
        log << "Gamma_nn(delta=" << shortest(deltas.back()) << "g) / Gamma_nn(delta=" << shortest(deltas.front())
            << "g) = " << delta_rows.back().gamma_nn / delta_rows.front().gamma_nn << '\n';
    }
    log << "largest |Gamma| over requested separations with |dm|+|dn| >= 2: " << distant_max << '\n';
    return kSuccess;
}

int cmd_cluster(const RunConfig& config, std::ostream& log) {
    const LatticeConfig& lattice = config.lattice;
    if (lattice.sites() > QubitRegister::kMaxQubits) {
        throw ConfigError("cluster of " + std::to_string(lattice.sites()) + " qubits exceeds the cap of " +
                          std::to_string(QubitRegister::kMaxQubits));
    }
    if (lattice.sites() < 2) throw ConfigError("cluster needs at least two sites");
    double tau = 0.0;
    if (config.cluster_tau) {
        tau = *config.cluster_tau / lattice.coupling;
    } else {
        try {
            tau = solve_gate_time(lattice, std::numbers::pi / 4, nearest_separation(lattice));
        } catch (const GateTimeNotFound& e) {
            log << "error: " << e.what() << '\n';
            return kVerificationFailed;
        }
    }
    const PhaseShiftTable table = build_phase_table(lattice, tau);
    QubitRegister reg = product_state(lattice.rows, lattice.cols, Spin::up);
    apply_pairwise_xx(reg, table, config.nn_only);
    const double fidelity = cluster_fidelity(reg, config.periodic);

    QubitRegister corrected = reg;
    apply_cluster_correction(corrected, config.periodic);

    std::ostringstream out;
    out << header(config, "cluster");
    out << "g_tau = " << shortest(tau * lattice.coupling) << '\n';
    if (lattice.rows > 1) out << "gamma_1_0 = " << shortest(table.at(1, 0)) << '\n';
    if (lattice.cols > 1) out << "gamma_0_1 = " << shortest(table.at(0, 1)) << '\n';
    out << "max_gamma_beyond_nearest = " << shortest(table.max_beyond_nearest()) << '\n';
    out << "nn_only = " << (config.nn_only ? "true" : "false") << '\n';
    out << "fidelity = " << shortest(fidelity) << '\n';
    out << "deficit = " << shortest(1.0 - fidelity) << '\n';
    out << "site,m,n,stabilizer,purity\n";
    double min_stab = 1.0;
    double max_purity = 0.0;
    for (int s = 0; s < lattice.sites(); ++s) {
        const double stab =
            stabilizer_expectation(corrected, cluster_stabilizer(lattice.rows, lattice.cols, config.periodic, s));
        const double purity = single_site_purity(reg, s);
        min_stab = std::min(min_stab, stab);
        max_purity = std::max(max_purity, purity);
        out << s << ',' << s / lattice.cols << ',' << s % lattice.cols << ',' << shortest(stab) << ','
            << shortest(purity) << '\n';
    }
    write_file(config, "cluster_report.txt", out.str());
    if (config.snapshot) {
        std::ostringstream snap;
        snap << header(config, "cluster");
        snap << "index,real,imag\n";
        const auto amps = reg.amplitudes();
        for (std::size_t i = 0; i < amps.size(); ++i) {
            snap << i << ',' << shortest(amps[i].real()) << ',' << shortest(amps[i].imag()) << '\n';
        }
        write_file(config, "cluster_state.csv", snap.str());
    }
    maybe_write_feasibility(config, "cluster", log);

    log << "g tau = " << tau * lattice.coupling << ", fidelity = " << std::setprecision(15) << fidelity
        << ", deficit = " << 1.0 - fidelity << std::setprecision(6) << '\n';
    log << "min stabilizer = " << min_stab << ", max single-site purity = " << max_purity << '\n';
    if (config.nn_only && std::abs(1.0 - fidelity) > 1e-10) {
        log << "FAIL: nearest-neighbour evolution did not reach the cluster state\n";
        return kVerificationFailed;
    }
    return kSuccess;
}

int cmd_oracle_verify(const RunConfig& config, std::ostream& log) {
    const LatticeConfig& lattice = config.lattice;
    if (lattice.sites() > 4) throw ConfigError("oracle-verify handles at most 4 sites");
    struct Row {
        std::string check;
        double measured = 0.0;
        double reference = 0.0;
        double tolerance = 0.0;
        std::string status;
    };
    std::vector<Row> rows;
    const auto add = [&](std::string check, double measured, double reference, double tol, bool expect_fail = false) {
        const bool within = std::abs(measured - reference) <= tol;
        std::string status = within ? "pass" : "FAIL";
        if (expect_fail) status = within ? "FAIL" : "expected-fail";
        rows.push_back({std::move(check), measured, reference, tol, status});
    };

    const IdentityReport ids = check_identities(lattice.rows, lattice.cols);
    add("commutator_Sz_JdagJ", ids.commutator_sz_jdagj, 0.0, 1e-14);
    add("anticommutator_Sz_J", ids.anticommutator_sz_j, 0.0, 1e-14);
    add("anticommutator_Sz_Jdag", ids.anticommutator_sz_jdag, 0.0, 1e-14);
    add("mutual_commutator_J", ids.mutual_commutator, 0.0, 1e-14);
    if (config.self_test) {
        const IdentityReport bad = check_identities(lattice.rows, lattice.cols, 0);
        add("self_test_corrupted_Sz", bad.anticommutator_sz_j, 0.0, 1e-14, true);
    }

    OracleSettings settings;
    settings.n_max = config.n_max;
    settings.tolerance = config.tolerance;
    settings.reset_time_origin = config.reset_time_origin;
    const double tau = config.oracle_tau / lattice.coupling;

    std::vector<double> measured_pairs;
    try {
        const EvolutionReport report = echo_evolve(lattice, tau, settings);
        add("residual_excitation", report.residual_excitation, 0.0, config.residual_tolerance);
        add("integrator_error_estimate", report.error_estimate, 0.0, config.tolerance);
        const Eigen::MatrixXcd analytic = analytic_echo_unitary(lattice, tau);
        add("echo_block_vs_analytic", (report.vacuum_block - analytic).cwiseAbs().maxCoeff(), 0.0,
            config.phase_tolerance);
        for (int a = 0; a < lattice.sites(); ++a) {
            for (int b = a + 1; b < lattice.sites(); ++b) {
                const int dm = b / lattice.cols - a / lattice.cols;
                const int dn = b % lattice.cols - a % lattice.cols;
                double gamma = std::nan("");
                try {
                    gamma = extract_pair_phase(report, a, b);
                } catch (const InvalidExtraction& e) {
                    log << "pair " << a << "-" << b << ": " << e.what() << '\n';
                }
                measured_pairs.push_back(gamma);
                add("pair_phase_" + std::to_string(a) + "_" + std::to_string(b), gamma,
                    pairwise_phase(lattice, tau, dm, dn), config.phase_tolerance);
            }
        }
        if (config.compare_n_max) {
            OracleSettings other = settings;
            other.n_max = *config.compare_n_max;
            const EvolutionReport second = echo_evolve(lattice, tau, other);
            double drift = 0.0;
            std::size_t k = 0;
            for (int a = 0; a < lattice.sites(); ++a) {
                for (int b = a + 1; b < lattice.sites(); ++b) {
                    drift = std::max(drift, std::abs(extract_pair_phase(second, a, b) - measured_pairs[k++]));
                }
            }
            add("truncation_drift_n" + std::to_string(config.n_max) + "_vs_n" + std::to_string(*config.compare_n_max),
                drift, 0.0, config.drift_tolerance);
        }
    } catch (const IntegratorNonConvergence& e) {
        log << "integrator: " << e.what() << '\n';
        rows.push_back({"integrator_convergence", std::nan(""), 0.0, config.tolerance, "FAIL"});
    } catch (const InvalidExtraction& e) {
        log << "extraction: " << e.what() << '\n';
        rows.push_back({"truncation_drift", std::nan(""), 0.0, config.drift_tolerance, "FAIL"});
    }

    std::ostringstream out;
    out << header(config, "oracle-verify");
    out << "check,measured,reference,delta,tolerance,status\n";
    bool ok = true;
    for (const Row& r : rows) {
        out << r.check << ',' << shortest(r.measured) << ',' << shortest(r.reference) << ','
            << shortest(std::abs(r.measured - r.reference)) << ',' << shortest(r.tolerance) << ',' << r.status << '\n';
        log << std::left << std::setw(34) << r.check << std::setw(14) << r.status << "delta " << std::setprecision(3)
            << std::abs(r.measured - r.reference) << std::setprecision(6) << '\n';
        ok = ok && r.status != "FAIL";
    }
    write_file(config, "oracle_report.csv", out.str());
    return ok ? kSuccess : kVerificationFailed;
}

int cmd_mbqc(const RunConfig& config, std::ostream& log) {
    if (config.pattern.empty()) throw ConfigError("no pattern file given ([mbqc] pattern or --pattern)");
    std::ifstream in(config.pattern, std::ios::binary);
    if (!in) throw ConfigError("cannot read pattern file '" + config.pattern + "'");
    std::ostringstream text;
    text << in.rdbuf();
    const MeasurementPattern pattern = parse_pattern(text.str());

    std::vector<ClusterSource> sources;
    if (config.source != "generated") sources.push_back(ClusterSource::reference);
    if (config.source != "reference") sources.push_back(ClusterSource::generated);

    std::ostringstream out;
    out << header(config, "mbqc");
    out << "pattern_steps = " << pattern.steps.size() << '\n';
    out << "logical_inputs = " << pattern.inputs.size() << '\n';
    out << "logical_outputs = " << pattern.outputs.size() << '\n';
    bool ok = true;
    std::vector<Eigen::MatrixXcd> maps;
    for (ClusterSource source : sources) {
        const char* name = source == ClusterSource::reference ? "reference" : "generated";
        Eigen::MatrixXcd map = branch_map(pattern, 0, source);
        map *= std::sqrt(static_cast<double>(map.cols())) / map.norm();
        // Fix the global phase on the first nonzero entry.
        for (Eigen::Index i = 0; i < map.size(); ++i) {
            if (std::abs(map(i)) > 1e-8) {
                map *= std::abs(map(i)) / map(i);
                break;
            }
        }
        maps.push_back(map);
        const BranchReport branches = enumerate_branches(pattern, map, source);
        const bool deterministic = branches.max_deviation < 1e-10;
        const bool normalised = std::abs(branches.probability_sum - 1.0) < 1e-12;

        std::string verdict = "n/a";
        if (map.rows() == map.cols() && map.rows() <= 16) verdict = to_string(classify_unitary(map));
        bool expected = true;
        if (config.expect == "identity") expected = verdict == "identity";
        if (config.expect == "clifford") expected = verdict == "identity" || verdict == "pauli" || verdict == "clifford";
        if (config.expect == "cnot") {
            expected = map.rows() == 4 && map.cols() == 4 && distance_up_to_phase(map, cnot_unitary()) < 1e-10;
        }

        MeasurementSession session(encoded_cluster(pattern, 0, source));
        const PatternResult sample = run_pattern(session, pattern, {}, config.seed);

        out << '\n' << "[" << name << "]\n";
        out << "branches = " << branches.branches << '\n';
        out << "probability_sum = " << shortest(branches.probability_sum) << '\n';
        out << "branch_probability_range = " << shortest(branches.min_probability) << ' '
            << shortest(branches.max_probability) << '\n';
        out << "max_branch_deviation = " << shortest(branches.max_deviation) << '\n';
        out << "deterministic = " << (deterministic ? "true" : "false") << '\n';
        out << "verdict = " << verdict << '\n';
        out << "logical_map (row: real imag pairs)\n";
        for (Eigen::Index r = 0; r < map.rows(); ++r) {
            for (Eigen::Index c = 0; c < map.cols(); ++c) {
                const cplx v = map(r, c);
                const double re = std::abs(v.real()) < 1e-14 ? 0.0 : v.real();
                const double im = std::abs(v.imag()) < 1e-14 ? 0.0 : v.imag();
                out << (c ? "  " : "") << shortest(re) << ' ' << shortest(im);
            }
            out << '\n';
        }
        out << "sample_seed = " << config.seed << '\n';
        out << "sample_outcomes =";
        for (int o : sample.record.outcomes) out << ' ' << (o > 0 ? "+1" : "-1");
        out << '\n';
        out << "sample_probability = " << shortest(sample.probability) << '\n';

        log << name << ": " << branches.branches << " branches, max deviation " << branches.max_deviation
            << ", probability sum " << std::setprecision(15) << branches.probability_sum << std::setprecision(6)
            << ", verdict " << verdict << '\n';
        if (!deterministic) log << "FAIL: branches disagree after feedforward\n";
        if (!normalised) log << "FAIL: branch probabilities do not sum to 1\n";
        if (!expected) log << "FAIL: logical map does not match expectation '" << config.expect << "'\n";
        ok = ok && deterministic && normalised && expected;
    }
    if (maps.size() == 2) {
        const double d = distance_up_to_phase(maps[0], maps[1]);
        out << "\nreference_vs_generated = " << shortest(d) << '\n';
        log << "reference vs generated logical maps differ by " << d << '\n';
        if (d > 1e-10) {
            log << "FAIL: generated cluster gives a different logical map\n";
            ok = false;
        }
    }
    write_file(config, "mbqc_report.txt", out.str());
    return ok ? kSuccess : kVerificationFailed;
}

int dispatch(const std::string& command, const RunConfig& config, std::ostream& log, std::ostream& err) {
    try {
        if (command == "gamma-sweep") return cmd_gamma_sweep(config, log);
        if (command == "cluster") return cmd_cluster(config, log);
        if (command == "oracle-verify") return cmd_oracle_verify(config, log);
        if (command == "mbqc") return cmd_mbqc(config, log);
        err << "error: unknown command '" << command << "'\n";
        return kUsageError;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const PatternParseError& e) {
        err << "error: pattern " << e.what() << '\n';
    } catch (const OutputError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kVerificationFailed;
    }
    return kUsageError;
}

}  // namespace cavity::cli
