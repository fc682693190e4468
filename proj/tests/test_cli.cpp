#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "qsync/cli.hpp"
#include "qsync/io.hpp"
#include "qsync/spin_algebra.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code;
    std::string err;
};

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("qsync_cli_" + std::string(info->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write_config(const json& j, const std::string& name = "config.json") {
        const auto path = (dir_ / name).string();
        std::ofstream(path) << j.dump();
        return path;
    }

    RunResult run(const std::string& args) {
        const auto err_path = dir_ / "stderr.txt";
        const std::string cmd = std::string(QSYNC_CLI_PATH) + " " + args + " 2> " + err_path.string();
        const int status = std::system(cmd.c_str());
        return {WEXITSTATUS(status), read(err_path)};
    }

    static std::string read(const fs::path& p) {
        std::ifstream f(p, std::ios::binary);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }

    static std::vector<std::vector<double>> read_csv(const fs::path& p, std::string& header) {
        std::ifstream f(p);
        std::getline(f, header);
        std::vector<std::vector<double>> rows;
        std::string line;
        while (std::getline(f, line)) {
            std::vector<double> row;
            std::stringstream ls(line);
            std::string cell;
            while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
            rows.push_back(row);
        }
        return rows;
    }

    fs::path dir_;
};

TEST_F(CliTest, SteadyWithoutDriveIsDarkState) {
    const auto r = run("steady --epsilon 0 --output-dir " + (dir_ / "out").string());
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const json j = json::parse(read(dir_ / "out" / "steady_state.json"));
    const auto rho = qsync::io::density_from_json(j);
    EXPECT_EQ(j["dim"], 3);
    EXPECT_NEAR(rho(1, 1).real(), 1.0, 1e-10);
    EXPECT_NEAR((rho - qsync::CMatrix(rho(1, 1) * Eigen::Vector3cd(0, 1, 0).asDiagonal())).cwiseAbs().maxCoeff(),
                0.0, 1e-10);
    std::string header;
    const auto phase = read_csv(dir_ / "out" / "phase.csv", header);
    EXPECT_EQ(header, "phi,s");
    EXPECT_EQ(phase.size(), 360u);
    for (const auto& row : phase) EXPECT_NEAR(row[1], 0.0, 1e-10);
}

TEST_F(CliTest, QfuncMatchesEquatorialFormula) {
    const auto cfg = write_config({{"epsilon", 0.0}, {"grid", {{"n_theta", 32}, {"n_phi", 36}}}});
    const auto r = run("qfunc --config " + cfg + " --output-dir " + dir_.string());
    ASSERT_EQ(r.exit_code, 0) << r.err;
    std::string header;
    const auto rows = read_csv(dir_ / "qfunc.csv", header);
    EXPECT_EQ(header, "theta,phi,q");
    ASSERT_EQ(rows.size(), 32u * 36u);
    for (const auto& row : rows) {
        EXPECT_NEAR(row[2], 3 * std::pow(std::sin(row[0]), 2) / (8 * qsync::kPi), 1e-12);
    }
}

TEST_F(CliTest, CompareSpinsDefault) {
    const auto r = run("compare-spins --output-dir " + dir_.string());
    ASSERT_EQ(r.exit_code, 0) << r.err;
    std::string header;
    const auto rows = read_csv(dir_ / "compare_spins.csv", header);
    EXPECT_EQ(header, "spin,s_max,phi_star");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0][0], 1.0);
    EXPECT_NEAR(rows[0][1], 0.032, 0.001);
    EXPECT_EQ(rows[1][0], 2.0);
    EXPECT_NEAR(rows[1][1], 0.001, 0.0002);
}

TEST_F(CliTest, ArnoldWritesSweepAndSidecar) {
    const auto cfg = write_config({{"grid", {{"n_theta", 24}, {"n_phi", 72}}},
                                   {"sweep", {{"deltas", {-1.0, 0.0, 1.0}}, {"epsilons", {0.05, 0.1}}}}});
    const auto r = run("arnold --threads 2 --config " + cfg + " --output-dir " + dir_.string());
    ASSERT_EQ(r.exit_code, 0) << r.err;
    std::string header;
    const auto rows = read_csv(dir_ / "arnold.csv", header);
    EXPECT_EQ(header, qsync::io::kSweepHeader);
    ASSERT_EQ(rows.size(), 6u);
    for (const auto& row : rows) EXPECT_EQ(row.size(), 5u);
    EXPECT_NEAR(rows[0][0], -0.1, 1e-15);  // units of gamma_min = 0.1
    EXPECT_NEAR(rows[0][1], 0.005, 1e-15);
    const json side = json::parse(read(dir_ / "arnold.json"));
    EXPECT_EQ(side["command"], "arnold");
    EXPECT_EQ(side["params"]["gamma_d"], 1.0);
    EXPECT_EQ(side["params"]["gamma_g"], 0.1);
}

TEST_F(CliTest, BreakdownAndNogoAndEvolve) {
    const auto cfg = write_config({{"grid", {{"n_theta", 24}, {"n_phi", 36}}},
                                   {"breakdown", {{"epsilons", {0.01, 1.0}}}},
                                   {"evolve", {{"t_final", 2.0}, {"stride", 50}}}});
    ASSERT_EQ(run("breakdown --config " + cfg + " --output-dir " + dir_.string()).exit_code, 0);
    std::string header;
    const auto rows = read_csv(dir_ / "breakdown.csv", header);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_GT(std::abs(rows[1][4]), 10 * std::abs(rows[0][4]));
    const json side = json::parse(read(dir_ / "breakdown.json"));
    EXPECT_EQ(side["equator_weight"].size(), 2u);

    ASSERT_EQ(run("nogo --config " + cfg + " --output-dir " + dir_.string()).exit_code, 0);
    const json nogo = json::parse(read(dir_ / "nogo.json"));
    EXPECT_EQ(nogo["verdict"], "extremal_only");
    EXPECT_LT(nogo["max_colinearity_error"].get<double>(), 1e-12);

    ASSERT_EQ(run("evolve --config " + cfg + " --output-dir " + dir_.string()).exit_code, 0);
    const auto traj = read_csv(dir_ / "trajectory.csv", header);
    EXPECT_EQ(header, "t,phi,s");
    EXPECT_FALSE(traj.empty());
    EXPECT_EQ(traj.front()[0], 0.0);
    EXPECT_NEAR(traj.back()[0], 2.0, 1e-12);
    EXPECT_EQ(traj.size() % 36, 0u);
}

TEST_F(CliTest, OutputsAreByteIdenticalAcrossRuns) {
    const auto cfg = write_config({{"grid", {{"n_theta", 16}, {"n_phi", 24}}},
                                   {"sweep", {{"deltas", {0.0, 0.5}}, {"epsilons", {0.1}}}}});
    for (const char* out : {"a", "b"}) {
        ASSERT_EQ(run("arnold --threads 2 --config " + cfg + " --output-dir " + (dir_ / out).string()).exit_code, 0);
        ASSERT_EQ(run("steady --config " + cfg + " --output-dir " + (dir_ / out).string()).exit_code, 0);
    }
    for (const char* f : {"arnold.csv", "phase.csv", "steady_state.json"}) {
        EXPECT_EQ(read(dir_ / "a" / f), read(dir_ / "b" / f)) << f;
    }
}

TEST_F(CliTest, ConfigErrorsExitWithOne) {
    const auto bad = write_config({{"spin", 1}, {"colour", "red"}});
    const auto r = run("steady --config " + bad + " --output-dir " + dir_.string());
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.err.find("colour"), std::string::npos);
    EXPECT_EQ(run("steady --config " + (dir_ / "missing.json").string()).exit_code, 1);
    EXPECT_EQ(run("frobnicate").exit_code, 1);
    EXPECT_EQ(run("steady --spin 0.3 --output-dir " + dir_.string()).exit_code, 1);
}

TEST_F(CliTest, SolverErrorsExitWithTwoAndNamePoint) {
    // damping only with no drive: two dark states
    const auto r = run("steady --gamma-g 0 --epsilon 0 --delta 0.25 --output-dir " + dir_.string());
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("delta=0.25"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("epsilon=0"), std::string::npos) << r.err;

    const auto cfg = write_config({{"gamma_g", 0.0}, {"sweep", {{"deltas", {0.0}}, {"epsilons", {0.0}}}}});
    const auto s = run("arnold --config " + cfg + " --output-dir " + dir_.string());
    EXPECT_EQ(s.exit_code, 2);
    EXPECT_NE(s.err.find("degenerate"), std::string::npos) << s.err;
    EXPECT_FALSE(fs::exists(dir_ / "arnold.csv"));
}

TEST(CliInProcess, RunRejectsUnknownCommand) {
    std::ostringstream err;
    qsync::RunConfig cfg;
    cfg.output = (fs::temp_directory_path() / "qsync_inproc").string();
    EXPECT_EQ(qsync::cli::run("plot", cfg, 1, err), qsync::cli::kConfigError);
    fs::remove_all(cfg.output);
}

}  // namespace
