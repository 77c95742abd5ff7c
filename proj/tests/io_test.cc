#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qwalk/io.h"

using namespace qwalk;
using nlohmann::json;

namespace {

std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

RunConfig sample_config() {
    RunConfig c;
    c.subcommand = "simulate";
    c.n = 16;
    c.marked = {{3, 4}, {0, 1}};
    c.strategy = "fixed:5";
    c.radius_rule = "epsilon-box:0.3";
    c.epsilons = {0.25, 0.5};
    c.betas = {1.0};
    c.trials = 12;
    c.master_seed = 0xFFFFFFFFFFFFFFFFull;
    c.workers = 3;
    c.outputs = {{"profile_csv", "a.csv"}};
    return c;
}

}  // namespace

TEST(RunConfig, JsonRoundTrip) {
    const RunConfig c = sample_config();
    const RunConfig back = json(c).get<RunConfig>();
    EXPECT_EQ(json(back), json(c));
    EXPECT_EQ(back.master_seed, c.master_seed);
    EXPECT_EQ(back.marked, c.marked);
}

TEST(RunConfig, MissingKeysTakeDefaults) {
    const RunConfig c = json::parse(R"({"subcommand": "sweep", "sizes": [8]})").get<RunConfig>();
    EXPECT_EQ(c.n, 64);
    EXPECT_EQ(c.marked, (std::vector<Site>{{0, 0}}));
    EXPECT_EQ(c.strategy, "max-marked-prob");
}

TEST(Csv, PreambleAndHeaders) {
    const RunConfig c = sample_config();
    const GridGeometry g(8);
    const auto profile = lines(profile_csv(distance_profile(uniform_state(g), Site{0, 0}), c));
    EXPECT_EQ(profile[0], "# schema: qwalk.profile/1");
    EXPECT_EQ(profile[1].rfind("# config: {", 0), 0u);
    EXPECT_EQ(profile[2], "radius,site_count,total_prob,mean_prob");
    EXPECT_EQ(profile[3], "0,1,0.015625,0.015625");
    EXPECT_EQ(profile.size(), 3u + 9);

    std::vector<ScalingRow> rows(1);
    rows[0].n = 8;
    rows[0].success = 0.5;
    RunConfig no_trials = c;
    no_trials.trials = 0;
    EXPECT_EQ(lines(sweep_csv(rows, no_trials))[2], "n,t_star,pr0,nbhd_prob,pr0_lnN");
    EXPECT_EQ(lines(sweep_csv(rows, c))[2], "n,t_star,pr0,nbhd_prob,pr0_lnN,success");
    EXPECT_EQ(lines(sweep_csv(rows, c))[3], "8,0,0,0,0,0.5");
}

TEST(Csv, RealsRoundTrip) {
    for (double v : {0.1, 1.0 / 3, 1e-300, -2047.4999999999982, 6.02214076e23}) {
        EXPECT_EQ(std::stod(format_real(v)), v);
    }
    EXPECT_EQ(format_real(0.5), "0.5");
}

TEST(Csv, PostprocessRows) {
    const GridGeometry g(8);
    const SearchResult r = run_search(g, MarkedSet(g, {{0, 0}}));
    const SuccessEstimate est = estimate_success(r.final_state, r.marked, 2, Metric::L1, 20, 9);
    const auto text = lines(postprocess_csv(r, est, Metric::L1, sample_config()));
    ASSERT_EQ(text.size(), 3u + 20);
    EXPECT_EQ(text[2], "trial,x,y,direction,distance,found,sites_checked");
}

TEST(LoadConfig, FromCsvAndJson) {
    const auto dir = std::filesystem::temp_directory_path() / ("qwalk_io_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const RunConfig c = sample_config();
    write_text(dir / "x.csv", csv_preamble("profile", c) + "radius\n0\n");
    EXPECT_EQ(json(load_config(dir / "x.csv")), json(c));
    write_text(dir / "x.json", json{{"schema", "qwalk.result/1"}, {"config", c}}.dump());
    EXPECT_EQ(json(load_config(dir / "x.json")), json(c));
    write_text(dir / "bare.json", json(c).dump());
    EXPECT_EQ(json(load_config(dir / "bare.json")), json(c));
    EXPECT_THROW(load_config(dir / "missing.json"), std::runtime_error);
    std::filesystem::remove_all(dir);
}

TEST(ResultJson, Contents) {
    const GridGeometry g(16);
    const SearchResult r = run_search(g, MarkedSet(g, {{2, 2}}));
    const json j = result_json(r, sample_config());
    EXPECT_EQ(j.at("schema"), "qwalk.result/1");
    EXPECT_EQ(j.at("t_star"), r.t_star);
    EXPECT_EQ(j.at("marked_prob_trace").size(), r.t_max);
    EXPECT_EQ(j.at("config").at("strategy"), "fixed:5");
    EXPECT_NEAR(j.at("profile_total").get<double>(), 1.0, 1e-12);
}

TEST(SpectrumJson, Contents) {
    const GridGeometry g(4);
    const auto residuals = eigen_residuals(g);
    const SpectrumComparison dense = compare_spectrum(g);
    const json j = spectrum_json(g, residuals, &dense, nullptr, sample_config());
    EXPECT_EQ(j.at("schema"), "qwalk.spectrum/1");
    EXPECT_EQ(j.at("eigen_relation").at("pairs").size(), residuals.size());
    EXPECT_TRUE(j.at("dense_spectrum").at("complete").get<bool>());
    EXPECT_FALSE(j.contains("prediction"));
}

TEST(DefaultWorkers, ReadsEnvironment) {
    ::setenv("QWALK_WORKERS", "3", 1);
    EXPECT_EQ(default_workers(), 3);
    ::setenv("QWALK_WORKERS", "three", 1);
    EXPECT_EQ(default_workers(), 1);
    ::unsetenv("QWALK_WORKERS");
    EXPECT_EQ(default_workers(), 1);
}
