#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kBinary = QWALK_BIN;

int qwalk(const std::string &args) {
    const std::string cmd = kBinary.string() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

class Cli : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("qwalk_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) + "_" +
                std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string out() const { return "--out-dir " + dir_.string(); }
    fs::path dir_;
};

}  // namespace

TEST_F(Cli, SimulateProfileSumsToOne) {
    ASSERT_EQ(qwalk("simulate --n 64 --marked 0,0 " + out()), 0);
    std::istringstream csv(slurp(dir_ / "profile_n64.csv"));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "# schema: qwalk.profile/1");
    std::getline(csv, line);
    std::getline(csv, line);
    EXPECT_EQ(line, "radius,site_count,total_prob,mean_prob");
    double total = 0;
    while (std::getline(csv, line)) {
        std::stringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');
        std::getline(row, cell, ',');
        std::getline(row, cell, ',');
        total += std::stod(cell);
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
    const auto result = nlohmann::json::parse(slurp(dir_ / "result_n64.json"));
    EXPECT_EQ(result.at("t_star"), 126);
    EXPECT_EQ(result.at("config").at("subcommand"), "simulate");
}

TEST_F(Cli, OutputsAreByteIdenticalAndReplayable) {
    ASSERT_EQ(qwalk("postprocess --n 16 --trials 50 --seed 4 --workers 1 " + out()), 0);
    const auto first = slurp(dir_ / "postprocess_n16.csv");
    ASSERT_EQ(qwalk("postprocess --n 16 --trials 50 --seed 4 --workers 1 " + out()), 0);
    EXPECT_EQ(slurp(dir_ / "postprocess_n16.csv"), first);
    fs::copy_file(dir_ / "postprocess_n16.csv", dir_ / "saved.csv");
    fs::remove(dir_ / "postprocess_n16.csv");
    ASSERT_EQ(qwalk("replay " + (dir_ / "saved.csv").string()), 0);
    EXPECT_EQ(slurp(dir_ / "postprocess_n16.csv"), first);
}

TEST_F(Cli, SweepColumns) {
    ASSERT_EQ(qwalk("sweep --sizes 16,32 --radius fourth-root --trials 20 " + out()), 0);
    std::istringstream csv(slurp(dir_ / "sweep.csv"));
    std::vector<std::string> lines;
    for (std::string l; std::getline(csv, l);) {
        lines.push_back(l);
    }
    ASSERT_EQ(lines.size(), 5u);
    EXPECT_EQ(lines[2], "n,t_star,pr0,nbhd_prob,pr0_lnN,success");
    EXPECT_EQ(lines[3].substr(0, 3), "16,");
}

TEST_F(Cli, AnalyticAndSpectrum) {
    ASSERT_EQ(qwalk("analytic --sizes 16,32 --epsilons 0.5 --betas 1 --table-n 8 " + out()), 0);
    EXPECT_NE(slurp(dir_ / "analytic.csv").find("\nlog_asymptote,16,"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir_ / "ftable_n8.csv"));
    ASSERT_EQ(qwalk("spectrum --n 4 --predict-n 16 " + out()), 0);
    const auto j = nlohmann::json::parse(slurp(dir_ / "spectrum_n4.json"));
    EXPECT_TRUE(j.at("dense_spectrum").at("complete").get<bool>());
    EXPECT_GT(j.at("prediction").at("overlap").get<double>(), 0.9);
}

TEST_F(Cli, Selftest) { EXPECT_EQ(qwalk("selftest"), 0); }

TEST_F(Cli, UsageErrors) {
    EXPECT_NE(qwalk("simulate --n 63 " + out()), 0);
    EXPECT_NE(qwalk("simulate --n 8 --marked 9,0 " + out()), 0);
    EXPECT_NE(qwalk("simulate --n 8 --marked zero " + out()), 0);
    EXPECT_NE(qwalk("simulate --n 8 --strategy fixed:999 " + out()), 0);
    EXPECT_NE(qwalk("sweep " + out()), 0);
    EXPECT_NE(qwalk("frobnicate"), 0);
    EXPECT_NE(qwalk(""), 0);
}
