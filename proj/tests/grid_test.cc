#include <gtest/gtest.h>

#include "qwalk/grid.h"

using namespace qwalk;

TEST(Wrap, Examples) {
    EXPECT_EQ(wrap(-1, 8), 7);
    EXPECT_EQ(wrap(8, 8), 0);
    EXPECT_EQ(wrap(3, 8), 3);
    EXPECT_EQ(wrap(-17, 8), 7);
}

TEST(Geometry, RejectsOddOrTiny) {
    EXPECT_THROW(GridGeometry(7), std::invalid_argument);
    EXPECT_THROW(GridGeometry(0), std::invalid_argument);
    EXPECT_NO_THROW(GridGeometry(2));
}

TEST(Geometry, SiteIndexRoundTrip) {
    const GridGeometry g(6);
    for (std::size_t i = 0; i < g.sites(); ++i) {
        EXPECT_EQ(g.site_index(g.site_at(i)), i);
    }
    EXPECT_EQ(g.site_index({2, 3}), 3u * 6 + 2);
}

TEST(Distance, L1Examples) {
    const GridGeometry g(8);
    EXPECT_EQ(torus_l1_distance({0, 0}, {0, 0}, g), 0);
    EXPECT_EQ(torus_l1_distance({0, 0}, {7, 7}, g), 2);
    EXPECT_EQ(torus_l1_distance({1, 2}, {5, 2}, g), 4);
}

TEST(Distance, LinfExamples) {
    const GridGeometry g(8);
    EXPECT_EQ(torus_linf_distance({0, 0}, {7, 1}, g), 1);
    EXPECT_EQ(torus_linf_distance({3, 3}, {3, 3}, g), 0);
    EXPECT_EQ(torus_linf_distance({0, 0}, {4, 2}, g), 4);
}

TEST(MarkedSet, ValidatesAndSorts) {
    const GridGeometry g(8);
    EXPECT_THROW(MarkedSet(g, {{8, 0}}), std::invalid_argument);
    EXPECT_THROW(MarkedSet(g, {{-1, 0}}), std::invalid_argument);
    EXPECT_THROW(MarkedSet(g, {{1, 1}, {1, 1}}), std::invalid_argument);
    const MarkedSet m(g, {{5, 5}, {1, 2}});
    ASSERT_EQ(m.size(), 2u);
    EXPECT_EQ(m.sites()[0], (Site{1, 2}));
    EXPECT_TRUE(m.contains({5, 5}));
    EXPECT_FALSE(m.contains({5, 4}));
    EXPECT_EQ(m.distance_to({6, 6}, g), 2);
    EXPECT_EQ(m.distance_to({6, 6}, g, Metric::Linf), 1);
    EXPECT_EQ(MarkedSet{}.distance_to({0, 0}, g), -1);
}

TEST(UniformState, Amplitudes) {
    for (int n : {2, 4}) {
        const WalkState s = uniform_state(GridGeometry(n));
        ASSERT_EQ(s.amplitudes().size(), 4u * n * n);
        for (Complex a : s.amplitudes()) {
            EXPECT_DOUBLE_EQ(a.real(), n == 2 ? 0.25 : 0.125);
            EXPECT_EQ(a.imag(), 0.0);
        }
    }
    for (int n : {2, 8, 30}) {
        EXPECT_NEAR(uniform_state(GridGeometry(n)).norm_squared(), 1.0, 1e-12);
    }
}

TEST(Overlap, Examples) {
    const GridGeometry g(4);
    const WalkState u = uniform_state(g);
    EXPECT_NEAR(std::abs(overlap(u, u) - 1.0), 0.0, 1e-12);
    const WalkState a = WalkState::basis(g, {1, 2}, Direction::Up);
    const WalkState b = WalkState::basis(g, {1, 2}, Direction::Down);
    EXPECT_EQ(overlap(a, b), Complex(0.0));
    EXPECT_EQ(overlap(a, a), Complex(1.0));
    EXPECT_THROW(overlap(a, uniform_state(GridGeometry(6))), std::invalid_argument);
}

TEST(SiteProbability, Examples) {
    const GridGeometry g(4);
    EXPECT_NEAR(site_probability(uniform_state(g), {3, 1}), 1.0 / 16, 1e-15);
    EXPECT_EQ(site_probability(WalkState::basis(g, {2, 3}, Direction::Up), {2, 3}), 1.0);
    double total = 0;
    for (double p : site_probabilities(uniform_state(GridGeometry(10)))) {
        total += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(WalkState, TranslationMovesAmplitude) {
    const GridGeometry g(8);
    const WalkState s = WalkState::basis(g, {6, 1}, Direction::Left).translated(3, -2);
    EXPECT_EQ(s.at({1, 7}, Direction::Left), Complex(1.0));
}

TEST(WalkState, RejectsWrongLength) {
    EXPECT_THROW(WalkState(GridGeometry(4), std::vector<Complex>(10)), std::invalid_argument);
}

TEST(Direction, NamesRoundTrip) {
    for (Direction d : kDirections) {
        EXPECT_EQ(parse_direction(direction_name(d)), d);
        EXPECT_EQ(opposite(opposite(d)), d);
    }
    EXPECT_THROW(parse_direction("north"), std::invalid_argument);
}
