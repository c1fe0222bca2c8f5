#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "run_config.hpp"

int main(int argc, char** argv) {
    using namespace cavity::cli;

    CLI::App app{"Geometric-phase cluster states in coupled-cavity arrays"};
    app.set_version_flag("--version", CAVITY_VERSION);
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> preset;
    std::optional<std::string> pattern;

    const auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (overrides [run] out)");
        sub->add_option("--seed", seed, "random seed (overrides [run] seed)");
        sub->add_option("--preset", preset, "hardware preset for the feasibility report")
            ->check(CLI::IsMember({"cpb", "qdot", "toroid"}));
    };
    common(app.add_subcommand("gamma-sweep", "Gamma versus detuning and interaction time"));
    common(app.add_subcommand("cluster", "generate and verify a cluster state"));
    common(app.add_subcommand("oracle-verify", "cross-check against truncated-Fock integration"));
    CLI::App* mbqc = app.add_subcommand("mbqc", "run a measurement pattern");
    common(mbqc);
    mbqc->add_option("--pattern", pattern, "pattern file (overrides [mbqc] pattern)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    RunConfig config;
    try {
        if (!config_path.empty()) config = load_config(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    }
    if (out_dir) config.out_dir = *out_dir;
    if (seed) config.seed = *seed;
    if (preset) config.preset = *preset;
    if (pattern) config.pattern = *pattern;

    const std::string command = app.get_subcommands().front()->get_name();
    return dispatch(command, config, std::cout, std::cerr);
}
