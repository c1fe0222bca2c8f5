#include "cavity/geomphase.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cavity/compensated_sum.hpp"
#include "cavity/kernels.hpp"

namespace cavity {

namespace {

void require_nonnegative_time(double tau) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw std::domain_error("interaction time must be finite and >= 0");
}

int wrap(int x, int period) {
    const int r = x % period;
    return r < 0 ? r + period : r;
}

// sin(x)/x, exact at 0.
double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

}  // namespace

cplx beta(const LatticeConfig& config, const Mode& mode, double tau) {
    require_nonnegative_time(tau);
    // 1 - e^{ix} = -2i sin(x/2) e^{ix/2}, so the omega -> 0 limit is smooth.
    const double half = 0.5 * mode.omega * tau;
    const double scale = config.coupling * tau / std::sqrt(static_cast<double>(config.sites())) * sinc(half);
    return cplx{0.0, -1.0} * scale * std::polar(1.0, half);
}

double gamma_mode(const LatticeConfig& config, const Mode& mode, double tau) {
    require_nonnegative_time(tau);
    const double prefactor = config.coupling * config.coupling / config.sites();
    const double w = mode.omega;
    const double x = w * tau;
    if (std::abs(x) < 0.1) {
        // tau - sin(w tau)/w = w^2 tau^3 (1/6 - x^2/120 + x^4/5040 - x^6/362880)
        const double x2 = x * x;
        const double series = 1.0 / 6.0 - x2 / 120.0 + x2 * x2 / 5040.0 - x2 * x2 * x2 / 362880.0;
        return prefactor * w * tau * tau * tau * series;
    }
    return prefactor / w * (tau - std::sin(x) / w);
}

double gamma_total(const LatticeConfig& config, double tau) {
    CompensatedSum sum;
    for (const Mode& mode : enumerate_modes(config)) sum += gamma_mode(config, mode, tau);
    return sum.value();
}

double pairwise_phase(const LatticeConfig& config, double tau, int dm, int dn) {
    config.validate();
    const int rm = wrap(dm, config.rows);
    const int rn = wrap(dn, config.cols);
    if (rm == 0 && rn == 0) throw std::domain_error("pairwise phase is undefined for a zero separation");
    CompensatedSum sum;
    for (const Mode& mode : enumerate_modes(config)) {
        sum += 4.0 * gamma_mode(config, mode, tau) * std::cos(mode.L * rm + mode.K * rn);
    }
    return sum.value();
}

// ---------------------------------------------------------------------------

PhaseShiftTable::PhaseShiftTable(LatticeConfig config, double tau, std::vector<double> values, bool has_zero_modes)
    : config_(config), tau_(tau), values_(std::move(values)), has_zero_modes_(has_zero_modes) {
    config_.validate();
    if (values_.size() != static_cast<std::size_t>(config_.sites())) {
        throw std::invalid_argument("phase table size does not match the lattice");
    }
}

PhaseShiftTable PhaseShiftTable::nearest_neighbor(int rows, int cols, double gamma_nn) {
    LatticeConfig config;
    config.rows = rows;
    config.cols = cols;
    config.validate();
    std::vector<double> values(static_cast<std::size_t>(rows * cols), 0.0);
    const auto set = [&](int dm, int dn) {
        const int rm = wrap(dm, rows);
        const int rn = wrap(dn, cols);
        if (rm != 0 || rn != 0) values[static_cast<std::size_t>(rm * cols + rn)] = gamma_nn;
    };
    set(1, 0);
    set(-1, 0);
    set(0, 1);
    set(0, -1);
    return PhaseShiftTable(config, 0.0, std::move(values), false);
}

double PhaseShiftTable::at(int dm, int dn) const {
    const int rm = wrap(dm, rows());
    const int rn = wrap(dn, cols());
    if (rm == 0 && rn == 0) throw std::domain_error("pairwise phase is undefined for a zero separation");
    return values_[static_cast<std::size_t>(rm * cols() + rn)];
}

std::vector<PhaseShiftTable::Entry> PhaseShiftTable::canonical_entries() const {
    std::vector<Entry> out;
    for (int dm = -((rows() - 1) / 2); dm <= rows() / 2; ++dm) {
        for (int dn = -((cols() - 1) / 2); dn <= cols() / 2; ++dn) {
            if (dm == 0 && dn == 0) continue;
            out.push_back({{dm, dn}, at(dm, dn)});
        }
    }
    return out;
}

double PhaseShiftTable::max_beyond_nearest() const {
    double best = 0.0;
    for (const Entry& e : canonical_entries()) {
        if (std::abs(e.separation.dm) + std::abs(e.separation.dn) >= 2) best = std::max(best, std::abs(e.gamma));
    }
    return best;
}

PhaseShiftTable build_phase_table(const LatticeConfig& config, double tau, Execution exec) {
    require_nonnegative_time(tau);
    const auto modes = enumerate_modes(config);
    std::vector<double> weight;
    std::vector<double> L;
    std::vector<double> K;
    bool zero_modes = false;
    for (const Mode& mode : modes) {
        weight.push_back(4.0 * gamma_mode(config, mode, tau));
        L.push_back(mode.L);
        K.push_back(mode.K);
        zero_modes = zero_modes || std::abs(mode.omega) < 1e-12;
    }
    std::vector<double> values(modes.size());
    if (exec == Execution::serial) {
        kernels::serial::mode_sum_table(weight, L, K, config.rows, config.cols, values);
    } else {
        kernels::parallel::mode_sum_table(weight, L, K, config.rows, config.cols, values);
    }
    values[0] = 0.0;  // self term carries no pair coupling
    return PhaseShiftTable(config, tau, std::move(values), zero_modes);
}

// ---------------------------------------------------------------------------

namespace {

std::string describe_not_found(double target, double max_achieved) {
    std::ostringstream os;
    os << "no gate time reaches Gamma = " << target << " in the search window (max achieved " << max_achieved << ")";
    return os.str();
}

}  // namespace

GateTimeNotFound::GateTimeNotFound(double target, double max_achieved)
    : std::runtime_error(describe_not_found(target, max_achieved)), target_(target), max_achieved_(max_achieved) {}

double solve_gate_time(const LatticeConfig& config, double target, Separation separation,
                       const GateTimeSearch& search) {
    if (!(target > 0.0)) throw std::domain_error("gate-time target must be positive");
    config.validate();
    if (wrap(separation.dm, config.rows) == 0 && wrap(separation.dn, config.cols) == 0) {
        throw std::domain_error("gate-time separation is congruent to zero on this lattice");
    }
    const auto phase = [&](double tau) { return pairwise_phase(config, tau, separation.dm, separation.dn); };

    const int steps = static_cast<int>(std::ceil(search.window / search.grid_step - 1e-9));
    double lo = 0.0;
    double max_achieved = 0.0;
    for (int i = 1; i <= steps; ++i) {
        const double hi = std::min(i * search.grid_step, search.window);
        const double value = phase(hi);
        max_achieved = std::max(max_achieved, value);
        if (value >= target) {
            double a = lo;
            double b = hi;
            while (b - a > search.rel_tol * b) {
                const double mid = 0.5 * (a + b);
                if (phase(mid) >= target) {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            return 0.5 * (a + b);
        }
        lo = hi;
    }
    throw GateTimeNotFound(target, max_achieved);
}

std::vector<DeltaSweepRow> sweep_delta(const LatticeConfig& config, double tau, const std::vector<double>& delta_grid,
                                       Execution exec) {
    if (delta_grid.empty()) throw std::invalid_argument("detuning grid is empty");
    require_nonnegative_time(tau);
    config.validate();
    if (config.rows == 1) throw std::domain_error("nearest-neighbour separation (1, 0) needs at least two rows");
    for (double d : delta_grid) {
        if (!std::isfinite(d)) throw std::invalid_argument("detuning grid contains a non-finite value");
    }
    std::vector<DeltaSweepRow> rows(delta_grid.size());
    const auto point = [&](std::size_t i) {
        LatticeConfig c = config;
        c.detuning = delta_grid[i];
        rows[i] = {delta_grid[i], pairwise_phase(c, tau, 1, 0)};
    };
    if (exec == Execution::serial) {
        kernels::serial::for_each_index(rows.size(), point);
    } else {
        kernels::parallel::for_each_index(rows.size(), point);
    }
    return rows;
}

std::vector<TauSweepRow> sweep_tau(const LatticeConfig& config, const std::vector<double>& tau_grid,
                                   const std::vector<Separation>& separations, Execution exec) {
    if (tau_grid.empty()) throw std::invalid_argument("interaction-time grid is empty");
    if (separations.empty()) throw std::invalid_argument("separation list is empty");
    config.validate();
    for (double t : tau_grid) require_nonnegative_time(t);
    for (const Separation& s : separations) {
        if (wrap(s.dm, config.rows) == 0 && wrap(s.dn, config.cols) == 0) {
            throw std::domain_error("separation congruent to zero on this lattice");
        }
    }
    std::vector<TauSweepRow> rows(tau_grid.size());
    const auto point = [&](std::size_t i) {
        TauSweepRow row{tau_grid[i], {}};
        row.gamma.reserve(separations.size());
        for (const Separation& s : separations) row.gamma.push_back(pairwise_phase(config, tau_grid[i], s.dm, s.dn));
        rows[i] = std::move(row);
    };
    if (exec == Execution::serial) {
        kernels::serial::for_each_index(rows.size(), point);
    } else {
        kernels::parallel::for_each_index(rows.size(), point);
    }
    return rows;
}

}  // namespace cavity
