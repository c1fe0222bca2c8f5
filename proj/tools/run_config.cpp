#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "cavity/numfmt.hpp"

namespace cavity::cli {

std::vector<double> Grid::values() const {
    if (!(step > 0.0) || !std::isfinite(min) || !std::isfinite(max)) return {};
    if (max < min) return {};
    const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) v[i] = min + static_cast<double>(i) * step;
    return v;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double to_double(int line, std::string_view v) {
    const auto d = parse_double(v);
    if (!d || !std::isfinite(*d)) fail(line, "expected a number, got '" + std::string(v) + "'");
    return *d;
}

long long to_integer(int line, std::string_view v) {
    const auto i = parse_integer(v);
    if (!i) fail(line, "expected an integer, got '" + std::string(v) + "'");
    return *i;
}

bool to_bool(int line, std::string_view v) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail(line, "expected true or false, got '" + std::string(v) + "'");
}

std::string one_of(int line, std::string_view v, std::initializer_list<std::string_view> allowed) {
    for (std::string_view a : allowed) {
        if (v == a) return std::string(v);
    }
    std::string list;
    for (std::string_view a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
    fail(line, "expected one of " + list + ", got '" + std::string(v) + "'");
}

// "1,0 1,1 2,0"
std::vector<Separation> to_separations(int line, std::string_view v) {
    std::vector<Separation> out;
    std::istringstream in{std::string(v)};
    std::string item;
    while (in >> item) {
        const auto comma = item.find(',');
        if (comma == std::string::npos) fail(line, "separation '" + item + "' must be dm,dn");
        out.push_back({static_cast<int>(to_integer(line, std::string_view(item).substr(0, comma))),
                       static_cast<int>(to_integer(line, std::string_view(item).substr(comma + 1)))});
    }
    return out;
}

using Setter = std::function<void(RunConfig&, int, std::string_view)>;

const std::map<std::string, std::map<std::string, Setter>>& schema() {
    static const std::map<std::string, std::map<std::string, Setter>> s{
        {"lattice",
         {
             {"rows", [](RunConfig& c, int l, std::string_view v) { c.lattice.rows = static_cast<int>(to_integer(l, v)); }},
             {"cols", [](RunConfig& c, int l, std::string_view v) { c.lattice.cols = static_cast<int>(to_integer(l, v)); }},
             {"coupling", [](RunConfig& c, int l, std::string_view v) { c.lattice.coupling = to_double(l, v); }},
             {"tunneling", [](RunConfig& c, int l, std::string_view v) { c.lattice.tunneling = to_double(l, v); }},
             {"detuning", [](RunConfig& c, int l, std::string_view v) { c.lattice.detuning = to_double(l, v); }},
         }},
        {"run",
         {
             {"seed", [](RunConfig& c, int l, std::string_view v) {
                  const long long s = to_integer(l, v);
                  if (s < 0) fail(l, "seed must be non-negative");
                  c.seed = static_cast<std::uint64_t>(s);
              }},
             {"preset", [](RunConfig& c, int l, std::string_view v) { c.preset = one_of(l, v, {"cpb", "qdot", "toroid"}); }},
             {"out", [](RunConfig& c, int, std::string_view v) { c.out_dir = std::string(v); }},
         }},
        {"gamma-sweep",
         {
             {"tau", [](RunConfig& c, int l, std::string_view v) { c.sweep_tau = to_double(l, v); }},
             {"delta_min", [](RunConfig& c, int l, std::string_view v) { c.delta_grid.min = to_double(l, v); }},
             {"delta_max", [](RunConfig& c, int l, std::string_view v) { c.delta_grid.max = to_double(l, v); }},
             {"delta_step", [](RunConfig& c, int l, std::string_view v) { c.delta_grid.step = to_double(l, v); }},
             {"tau_min", [](RunConfig& c, int l, std::string_view v) { c.tau_grid.min = to_double(l, v); }},
             {"tau_max", [](RunConfig& c, int l, std::string_view v) { c.tau_grid.max = to_double(l, v); }},
             {"tau_step", [](RunConfig& c, int l, std::string_view v) { c.tau_grid.step = to_double(l, v); }},
             {"separations", [](RunConfig& c, int l, std::string_view v) { c.separations = to_separations(l, v); }},
         }},
        {"cluster",
         {
             {"tau", [](RunConfig& c, int l, std::string_view v) {
                  if (v == "auto") {
                      c.cluster_tau.reset();
                  } else {
                      c.cluster_tau = to_double(l, v);
                  }
              }},
             {"nn_only", [](RunConfig& c, int l, std::string_view v) { c.nn_only = to_bool(l, v); }},
             {"periodic", [](RunConfig& c, int l, std::string_view v) { c.periodic = to_bool(l, v); }},
             {"snapshot", [](RunConfig& c, int l, std::string_view v) { c.snapshot = to_bool(l, v); }},
         }},
        {"oracle",
         {
             {"n_max", [](RunConfig& c, int l, std::string_view v) { c.n_max = static_cast<int>(to_integer(l, v)); }},
             {"tolerance", [](RunConfig& c, int l, std::string_view v) { c.tolerance = to_double(l, v); }},
             {"tau", [](RunConfig& c, int l, std::string_view v) { c.oracle_tau = to_double(l, v); }},
             {"compare_n_max", [](RunConfig& c, int l, std::string_view v) {
                  if (v == "none") {
                      c.compare_n_max.reset();
                  } else {
                      c.compare_n_max = static_cast<int>(to_integer(l, v));
                  }
              }},
             {"self_test", [](RunConfig& c, int l, std::string_view v) { c.self_test = to_bool(l, v); }},
             {"reset_time_origin", [](RunConfig& c, int l, std::string_view v) { c.reset_time_origin = to_bool(l, v); }},
             {"phase_tolerance", [](RunConfig& c, int l, std::string_view v) { c.phase_tolerance = to_double(l, v); }},
             {"residual_tolerance", [](RunConfig& c, int l, std::string_view v) { c.residual_tolerance = to_double(l, v); }},
             {"drift_tolerance", [](RunConfig& c, int l, std::string_view v) { c.drift_tolerance = to_double(l, v); }},
         }},
        {"mbqc",
         {
             {"pattern", [](RunConfig& c, int, std::string_view v) { c.pattern = std::string(v); }},
             {"source", [](RunConfig& c, int l, std::string_view v) { c.source = one_of(l, v, {"reference", "generated", "both"}); }},
             {"expect", [](RunConfig& c, int l, std::string_view v) {
                  c.expect = one_of(l, v, {"none", "identity", "clifford", "cnot"});
              }},
         }},
    };
    return s;
}

std::string separations_text(const std::vector<Separation>& seps) {
    std::string s;
    for (const Separation& sep : seps) {
        if (!s.empty()) s += ' ';
        s += std::to_string(sep.dm) + "," + std::to_string(sep.dn);
    }
    return s;
}

}  // namespace

RunConfig parse_config(std::string_view text, RunConfig config) {
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!schema().contains(section)) fail(line_no, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected key = value");
        if (section.empty()) fail(line_no, "key outside of a section");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto& keys = schema().at(section);
        const auto it = keys.find(key);
        if (it == keys.end()) fail(line_no, "unknown key '" + key + "' in [" + section + "]");
        it->second(config, line_no, value);
    }
    try {
        config.lattice.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid lattice: ") + e.what());
    }
    if (config.n_max < 1) throw ConfigError("oracle n_max must be >= 1");
    if (!(config.tolerance > 0.0)) throw ConfigError("oracle tolerance must be positive");
    return config;
}

RunConfig load_config(const std::string& path, RunConfig base) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), std::move(base));
}

std::vector<std::pair<std::string, std::string>> RunConfig::resolved() const {
    return {
        {"lattice.rows", std::to_string(lattice.rows)},
        {"lattice.cols", std::to_string(lattice.cols)},
        {"lattice.coupling", shortest(lattice.coupling)},
        {"lattice.tunneling", shortest(lattice.tunneling)},
        {"lattice.detuning", shortest(lattice.detuning)},
        {"run.seed", std::to_string(seed)},
        {"run.preset", preset.value_or("none")},
        {"gamma-sweep.tau", shortest(sweep_tau)},
        {"gamma-sweep.delta", shortest(delta_grid.min) + ":" + shortest(delta_grid.step) + ":" + shortest(delta_grid.max)},
        {"gamma-sweep.tau_grid", shortest(tau_grid.min) + ":" + shortest(tau_grid.step) + ":" + shortest(tau_grid.max)},
        {"gamma-sweep.separations", separations_text(separations)},
        {"cluster.tau", cluster_tau ? shortest(*cluster_tau) : "auto"},
        {"cluster.nn_only", nn_only ? "true" : "false"},
        {"cluster.periodic", periodic ? "true" : "false"},
        {"oracle.n_max", std::to_string(n_max)},
        {"oracle.tolerance", shortest(tolerance)},
        {"oracle.tau", shortest(oracle_tau)},
        {"oracle.compare_n_max", compare_n_max ? std::to_string(*compare_n_max) : "none"},
        {"oracle.self_test", self_test ? "true" : "false"},
        {"oracle.reset_time_origin", reset_time_origin ? "true" : "false"},
        {"mbqc.pattern", pattern.empty() ? "none" : pattern},
        {"mbqc.source", source},
        {"mbqc.expect", expect},
    };
}

}  // namespace cavity::cli
