#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "fixtures.h"
#include "qwalk/random.h"
#include "qwalk/search.h"

using namespace qwalk;

namespace {

const SearchResult &search(int n) {
    static std::map<int, SearchResult> cache;
    if (auto it = cache.find(n); it != cache.end()) {
        return it->second;
    }
    const GridGeometry g(n);
    return cache.emplace(n, run_search(g, MarkedSet(g, {{0, 0}}))).first->second;
}

void expect_fixture(const fixtures::SearchFixture &fx) {
    const SearchResult &r = search(fx.n);
    EXPECT_EQ(r.t_star, fx.t_star);
    EXPECT_NEAR(r.marked_probability(), fx.pr0, fx.pr0 * fixtures::kRel);
    const double nb = neighborhood_probability(r.final_state, r.marked, RadiusRule::fourth_root().radius(r.geometry));
    EXPECT_NEAR(nb, fx.nbhd, fx.nbhd * fixtures::kRel);
}

}  // namespace

TEST(Strategy, ParseRoundTrip) {
    for (const char *text : {"max-marked-prob", "min-overlap", "fixed:17"}) {
        EXPECT_EQ(Strategy::parse(text).to_string(), text);
    }
    EXPECT_EQ(Strategy::parse("fixed:17").fixed_t, 17u);
    EXPECT_THROW(Strategy::parse("fixed:"), std::invalid_argument);
    EXPECT_THROW(Strategy::parse("fixed:-3"), std::invalid_argument);
    EXPECT_THROW(Strategy::parse("greedy"), std::invalid_argument);
}

TEST(RadiusRule, ParseAndRadius) {
    const GridGeometry g(64);
    EXPECT_EQ(RadiusRule::parse("fourth-root").radius(g), 8);
    EXPECT_EQ(RadiusRule::parse("epsilon-box:0.25").radius(g), 8);
    EXPECT_EQ(RadiusRule::parse("epsilon-box:0.25").metric(), Metric::Linf);
    EXPECT_EQ(RadiusRule::parse("step-count").radius(g), static_cast<int>(std::ceil(std::pow(4096 * std::log(4096.0), 0.25))));
    EXPECT_EQ(RadiusRule::fourth_root().radius(GridGeometry(1024)), 32);
    EXPECT_EQ(RadiusRule::fourth_root().radius(GridGeometry(128)), 12);
    EXPECT_THROW(RadiusRule::parse("epsilon-box:1.5"), std::invalid_argument);
    EXPECT_THROW(RadiusRule::parse("square"), std::invalid_argument);
}

TEST(MaxSteps, Formula) {
    EXPECT_EQ(max_steps(GridGeometry(16)), 76u);
    EXPECT_EQ(max_steps(GridGeometry(64)), 370u);
    EXPECT_EQ(ceil_power(4096, 0.25), 8);
    EXPECT_EQ(ceil_power(16384, 0.25), 12);
}

TEST(RunSearch, FixedZeroIsUniform) {
    const GridGeometry g(16);
    const SearchResult r = run_search(g, MarkedSet(g, {{4, 4}}), Strategy::fixed(0));
    EXPECT_EQ(r.t_star, 0u);
    EXPECT_LT(max_abs_difference(r.final_state, uniform_state(g)), 1e-15);
    EXPECT_NEAR(r.marked_probability(), 1.0 / 256, 1e-15);
}

TEST(RunSearch, Errors) {
    const GridGeometry g(8);
    EXPECT_THROW(run_search(g, MarkedSet{}), std::invalid_argument);
    EXPECT_THROW(run_search(g, MarkedSet(g, {{0, 0}}), Strategy::fixed(max_steps(g) + 1)), std::invalid_argument);
}

TEST(RunSearch, TracesAndSelection) {
    const GridGeometry g(16);
    const MarkedSet m(g, {{0, 0}});
    const SearchResult best = run_search(g, m);
    ASSERT_EQ(best.marked_prob_trace.size(), best.t_max);
    ASSERT_EQ(best.overlap_trace.size(), best.t_max);
    const auto peak = std::max_element(best.marked_prob_trace.begin(), best.marked_prob_trace.end());
    EXPECT_EQ(best.t_star, static_cast<std::size_t>(peak - best.marked_prob_trace.begin()) + 1);
    EXPECT_DOUBLE_EQ(best.marked_probability(), *peak);

    const SearchResult low = run_search(g, m, Strategy::min_overlap());
    const auto dip = std::min_element(low.overlap_trace.begin(), low.overlap_trace.end());
    EXPECT_EQ(low.t_star, static_cast<std::size_t>(dip - low.overlap_trace.begin()) + 1);
    EXPECT_NEAR(uniform_overlap_magnitude(low.final_state), *dip, 1e-15);

    const SearchResult fixed = run_search(g, m, Strategy::fixed(best.t_star));
    EXPECT_EQ(max_abs_difference(fixed.final_state, best.final_state), 0.0);
}

TEST(RunSearch, MarkedProbabilityFarAboveUniform) {
    const SearchResult &r = search(64);
    EXPECT_GT(r.marked_probability(), 100.0 / 4096);
}

TEST(RunSearch, FrozenFixtures) {
    expect_fixture(fixtures::kSearch64);
    expect_fixture(fixtures::kSearch128);
    expect_fixture(fixtures::kSearch256);
}

TEST(RunSearch, TStarWithinFactorTwoOfFittedScale) {
    std::vector<double> scaled;
    for (int n : {64, 128, 256}) {
        const double big_n = static_cast<double>(n) * n;
        scaled.push_back(static_cast<double>(search(n).t_star) / std::sqrt(big_n * std::log(big_n)));
    }
    const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
    // A constant c with every value in [c/2, 2c] exists iff max/min <= 4.
    EXPECT_LE(*hi / *lo, 4.0);
}

TEST(RunSearch, TranslationCovariant) {
    const GridGeometry g(16);
    const SearchResult a = run_search(g, MarkedSet(g, {{0, 0}}));
    const SearchResult b = run_search(g, MarkedSet(g, {{5, 11}}));
    EXPECT_EQ(a.t_star, b.t_star);
    EXPECT_LT(max_abs_difference(a.final_state.translated(5, 11), b.final_state), 1e-12);
}

TEST(Neighbourhood, Examples) {
    const SearchResult &r = search(64);
    const Site origin{0, 0};
    EXPECT_NEAR(neighborhood_probability(r.final_state, origin, 64), 1.0, 1e-9);
    EXPECT_NEAR(neighborhood_probability(r.final_state, origin, 64, Metric::Linf), 1.0, 1e-9);
    EXPECT_DOUBLE_EQ(neighborhood_probability(r.final_state, origin, 0), site_probability(r.final_state, origin));
    const double uniform_ball = static_cast<double>(ball_size_bound(8, Metric::L1)) / 4096;
    EXPECT_GT(neighborhood_probability(r.final_state, r.marked, 8), 10 * uniform_ball);
}

TEST(Profile, UniformState) {
    const DistanceProfile p = distance_profile(uniform_state(GridGeometry(8)), Site{0, 0});
    ASSERT_EQ(p.max_radius(), 8);
    EXPECT_EQ(p.site_count[0], 1u);
    for (int r = 1; r < 4; ++r) {
        EXPECT_NEAR(p.total_prob[r], 4.0 * r / 64, 1e-15);
        EXPECT_EQ(p.site_count[r], static_cast<std::size_t>(4 * r));
    }
    EXPECT_NEAR(p.total(), 1.0, 1e-12);
    std::size_t sites = 0;
    for (std::size_t c : p.site_count) {
        sites += c;
    }
    EXPECT_EQ(sites, 64u);
}

TEST(Profile, SumsToOneAndMeansConsistent) {
    const SearchResult &r = search(64);
    EXPECT_NEAR(r.profile.total(), 1.0, 1e-9);
    for (std::size_t i = 0; i < r.profile.total_prob.size(); ++i) {
        EXPECT_NEAR(r.profile.mean_prob[i] * static_cast<double>(r.profile.site_count[i]), r.profile.total_prob[i],
                    1e-15);
    }
}

TEST(Profile, InverseSquareDecay) {
    const SearchResult &r = search(256);
    const double slope = log_log_slope(r.profile, 2, 16);
    EXPECT_GT(slope, -2.5);
    EXPECT_LT(slope, -1.5);
}

TEST(Sampler, BasisStateIsDeterministic) {
    const GridGeometry g(8);
    const WalkState s = WalkState::basis(g, {3, 5}, Direction::Left);
    for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
        const Outcome o = sample_measurement(s, seed);
        EXPECT_EQ(o.site, (Site{3, 5}));
        EXPECT_EQ(o.direction, Direction::Left);
    }
}

TEST(Sampler, UniformFrequencies) {
    const GridGeometry g(4);
    const MeasurementSampler sampler(uniform_state(g));
    Rng rng(derive_seed(5, 0));
    std::vector<int> counts(16);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        ++counts[g.site_index(sampler.sample(rng).site)];
    }
    const double p = 1.0 / 16, sigma = std::sqrt(draws * p * (1 - p));
    for (int c : counts) {
        EXPECT_LE(std::abs(c - draws * p), 3 * sigma);
    }
}

TEST(Sampler, NeighbourhoodFrequencyMatchesExact) {
    const SearchResult &r = search(128);
    const int radius = 12;
    const MeasurementSampler sampler(r.final_state);
    int inside = 0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        Rng rng(derive_seed(3, static_cast<std::uint64_t>(i)));
        inside += r.marked.distance_to(sampler.sample(rng).site, r.geometry) <= radius ? 1 : 0;
    }
    const double p = neighborhood_probability(r.final_state, r.marked, radius);
    EXPECT_LE(std::abs(inside - draws * p), 3 * std::sqrt(draws * p * (1 - p)));
}

TEST(Postprocess, Examples) {
    const GridGeometry g(32);
    const MarkedSet m(g, {{10, 10}});
    const PostprocessResult hit = classical_postprocess({10, 10}, m, g, 0);
    EXPECT_TRUE(hit.found);
    EXPECT_EQ(hit.sites_checked, 1u);
    const PostprocessResult miss = classical_postprocess({13, 12}, m, g, 4);
    EXPECT_FALSE(miss.found);
    EXPECT_EQ(miss.sites_checked, 41u);
    const PostprocessResult near = classical_postprocess({11, 10}, m, g, 4);
    EXPECT_TRUE(near.found);
    EXPECT_LE(near.sites_checked, 5u);
    EXPECT_EQ(ball_size_bound(32, Metric::L1), 2113u);
    EXPECT_EQ(ball_size_bound(3, Metric::Linf), 49u);
}

TEST(Postprocess, SmallTorusDoesNotDoubleCount) {
    const GridGeometry g(4);
    EXPECT_TRUE(classical_postprocess({2, 2}, MarkedSet(g, {{3, 3}}), g, 4).found);
    EXPECT_FALSE(classical_postprocess({2, 2}, MarkedSet{}, g, 4).found);
    EXPECT_EQ(classical_postprocess({2, 2}, MarkedSet{}, g, 4).sites_checked, 16u);
    EXPECT_EQ(classical_postprocess({2, 2}, MarkedSet{}, g, 10, Metric::Linf).sites_checked, 16u);
}

TEST(Postprocess, CheckedSitesWithinBall) {
    const SearchResult &r = search(64);
    const SuccessEstimate est = estimate_success(r.final_state, r.marked, 8, Metric::L1, 500, 42);
    EXPECT_EQ(est.trials, 500u);
    EXPECT_LE(est.max_sites_checked, ball_size_bound(8, Metric::L1));
    const SuccessEstimate again = estimate_success(r.final_state, r.marked, 8, Metric::L1, 500, 42);
    EXPECT_EQ(est.successes, again.successes);
    EXPECT_EQ(est.mean_sites_checked, again.mean_sites_checked);
}

TEST(Sweep, ColumnsAndScaling) {
    SweepOptions opts;
    const auto rows = scaling_sweep({64, 128, 256}, opts);
    ASSERT_EQ(rows.size(), 3u);
    std::vector<double> nb, pl;
    for (const ScalingRow &row : rows) {
        EXPECT_FALSE(row.success.has_value());
        nb.push_back(row.nbhd_prob);
        pl.push_back(row.pr0_ln_n);
    }
    EXPECT_LT(*std::max_element(nb.begin(), nb.end()) / *std::min_element(nb.begin(), nb.end()), 2.0);
    EXPECT_LE(*std::max_element(pl.begin(), pl.end()) / *std::min_element(pl.begin(), pl.end()), 2.5);
    EXPECT_EQ(rows[0].t_star, fixtures::kSearch64.t_star);
    EXPECT_THROW(scaling_sweep({63}, opts), std::invalid_argument);
}

TEST(Sweep, TrialsAddSuccessColumn) {
    SweepOptions opts;
    opts.trials = 200;
    const auto rows = scaling_sweep({16}, opts);
    ASSERT_TRUE(rows[0].success.has_value());
    EXPECT_GT(*rows[0].success, 0.5);
}
