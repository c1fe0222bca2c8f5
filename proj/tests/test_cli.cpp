#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "run_config.hpp"

using namespace cavity::cli;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("cavity_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run(const std::string& command, const RunConfig& config) {
    std::ostringstream log, err;
    return dispatch(command, config, log, err);
}

}  // namespace

TEST(Config, ParsesSections) {
    const RunConfig c = parse_config(
        "[lattice]\nrows = 3\ncols = 4 ; comment\n[gamma-sweep]\nseparations = 1,0 2,-1\n"
        "[cluster]\ntau = auto\n[oracle]\ncompare_n_max = 2\n");
    EXPECT_EQ(c.lattice.rows, 3);
    EXPECT_EQ(c.lattice.cols, 4);
    ASSERT_EQ(c.separations.size(), 2u);
    EXPECT_EQ(c.separations[1].dn, -1);
    EXPECT_FALSE(c.cluster_tau.has_value());
    EXPECT_EQ(c.compare_n_max, 2);
}

TEST(Config, ErrorsNameTheLine) {
    const auto message = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(message("[lattice]\nrows = 2\nbogus = 1\n").find("line 3"), std::string::npos);
    EXPECT_NE(message("[nowhere]\n").find("line 1"), std::string::npos);
    EXPECT_NE(message("[lattice]\n\nrows = two\n").find("line 3"), std::string::npos);
    EXPECT_NE(message("rows = 2\n").find("line 1"), std::string::npos);
    EXPECT_NE(message("[lattice]\nrows = 0\n").find("invalid lattice"), std::string::npos);
}

TEST(Grid, Values) {
    EXPECT_EQ((Grid{0.0, 1.0, 0.25}.values().size()), 5u);
    EXPECT_TRUE((Grid{1.0, 0.0, 0.1}.values().empty()));
    EXPECT_EQ((Grid{0.0, 3.0, 0.01}.values().size()), 301u);
}

TEST(Commands, EmptyGridWritesNothing) {
    RunConfig c;
    c.out_dir = fresh_dir("empty").string();
    c.delta_grid = {1.0, 0.0, 0.5};
    EXPECT_NE(run("gamma-sweep", c), kSuccess);
    EXPECT_TRUE(fs::is_empty(c.out_dir));
}

TEST(Commands, GammaSweepIsReproducible) {
    RunConfig c;
    c.delta_grid = {0.0, 2.0, 0.5};
    c.tau_grid = {0.0, 1.0, 0.25};
    c.out_dir = fresh_dir("sweep_a").string();
    ASSERT_EQ(run("gamma-sweep", c), kSuccess);
    const std::string first = slurp(fs::path(c.out_dir) / "gamma_vs_delta.csv");
    const std::string first_tau = slurp(fs::path(c.out_dir) / "gamma_vs_tau.csv");
    c.out_dir = fresh_dir("sweep_b").string();
    ASSERT_EQ(run("gamma-sweep", c), kSuccess);
    EXPECT_EQ(slurp(fs::path(c.out_dir) / "gamma_vs_delta.csv"), first);
    EXPECT_EQ(slurp(fs::path(c.out_dir) / "gamma_vs_tau.csv"), first_tau);
    EXPECT_NE(first.find("delta_over_g,gamma_nn"), std::string::npos);
    EXPECT_EQ(first.rfind("# artifact", 0), 0u);
}

TEST(Commands, ClusterReport) {
    RunConfig c;
    c.lattice = {2, 2, 1.0, 0.1, 0.0};
    c.out_dir = fresh_dir("cluster").string();
    ASSERT_EQ(run("cluster", c), kSuccess);
    EXPECT_TRUE(fs::exists(fs::path(c.out_dir) / "cluster_report.txt"));
    EXPECT_TRUE(fs::exists(fs::path(c.out_dir) / "cluster_state.csv"));
}

TEST(Commands, ClusterGateTimeFailure) {
    RunConfig c;
    c.lattice = {2, 2, 1.0, 0.1, 50.0};
    c.out_dir = fresh_dir("cluster_fail").string();
    EXPECT_EQ(run("cluster", c), kVerificationFailed);
}

TEST(Commands, OracleSelfTest) {
    RunConfig c;
    c.lattice = {1, 2, 1.0, 0.1, 0.0};
    c.self_test = true;
    c.out_dir = fresh_dir("oracle").string();
    ASSERT_EQ(run("oracle-verify", c), kSuccess);
    const std::string report = slurp(fs::path(c.out_dir) / "oracle_report.csv");
    EXPECT_NE(report.find("expected-fail"), std::string::npos);
    EXPECT_EQ(report.find("FAIL"), std::string::npos);
}

TEST(Commands, MbqcMalformedPattern) {
    const fs::path dir = fresh_dir("mbqc");
    std::ofstream(dir / "bad.pat") << "lattice 1 3 periodic\ninput 0 0\n0 1 W 0 -\n";
    RunConfig c;
    c.pattern = (dir / "bad.pat").string();
    c.out_dir = dir.string();
    std::ostringstream log, err;
    EXPECT_EQ(dispatch("mbqc", c, log, err), kUsageError);
    EXPECT_NE(err.str().find("line 3"), std::string::npos);
}

TEST(Commands, UnknownCommand) { EXPECT_EQ(run("nope", RunConfig{}), kUsageError); }
