#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/grid.h"
#include "qwalk/random.h"
#include "qwalk/walk.h"

namespace qwalk {

/// How run_search picks the step count t_star in [0, T_max].
struct Strategy {
    enum class Rule : std::uint8_t { MaxMarkedProb, MinOverlap, FixedT };

    Rule rule = Rule::MaxMarkedProb;
    std::size_t fixed_t = 0;

    static Strategy max_marked_prob() { return {}; }
    static Strategy min_overlap() { return {Rule::MinOverlap, 0}; }
    static Strategy fixed(std::size_t t) { return {Rule::FixedT, t}; }

    std::string to_string() const;
    static Strategy parse(const std::string &text);
};

/// T_max = ceil(2 sqrt(N ln N)).
std::size_t max_steps(const GridGeometry &geom);

/// Smallest integer r with r >= base^exponent, robust to rounding when the
/// power is an exact integer.
long long ceil_power(double base, double exponent);

/// Neighbourhood used for localisation statistics and classical post-processing.
struct RadiusRule {
    enum class Kind : std::uint8_t {
        FourthRoot,  ///< L1 radius ceil(N^{1/4})
        EpsilonBox,  ///< L-infinity radius ceil(N^epsilon)
        StepCount,   ///< L1 radius ceil((N ln N)^{1/4}), about sqrt(N ln N) sites
    };

    Kind kind = Kind::FourthRoot;
    double epsilon = 0.25;

    static RadiusRule fourth_root() { return {}; }
    static RadiusRule epsilon_box(double eps) { return {Kind::EpsilonBox, eps}; }
    static RadiusRule step_count() { return {Kind::StepCount, 0.0}; }

    int radius(const GridGeometry &geom) const;
    Metric metric() const { return kind == Kind::EpsilonBox ? Metric::Linf : Metric::L1; }

    std::string to_string() const;
    static RadiusRule parse(const std::string &text);
};

/// Probability aggregated by torus-L1 distance R = 0..n from the nearest
/// marked site (or a single centre).
struct DistanceProfile {
    std::vector<double> total_prob;
    std::vector<std::size_t> site_count;
    std::vector<double> mean_prob;

    int max_radius() const { return static_cast<int>(total_prob.size()) - 1; }
    double total() const;
};

DistanceProfile distance_profile(const WalkState &state, Site center);
DistanceProfile distance_profile(const WalkState &state, const MarkedSet &marked);

/// Sum of site probabilities within `radius` of `center` in the given metric.
double neighborhood_probability(const WalkState &state, Site center, int radius, Metric metric = Metric::L1);
double neighborhood_probability(const WalkState &state, const MarkedSet &marked, int radius,
                                Metric metric = Metric::L1);

/// Least-squares slope of log(mean_prob[R]) against log R for R in [lo, hi].
double log_log_slope(const DistanceProfile &profile, int lo, int hi);

struct SearchResult {
    GridGeometry geometry;
    MarkedSet marked;
    Strategy strategy;
    std::size_t t_max = 0;
    std::size_t t_star = 0;
    WalkState final_state;
    std::vector<double> overlap_trace;      ///< entry t-1 holds |<psi(t)|psi(0)>|, t = 1..t_max
    std::vector<double> marked_prob_trace;  ///< entry t-1 holds Pr[marked] after t steps
    DistanceProfile profile;

    double marked_probability() const { return profile.total_prob.at(0); }
};

/// Evolves psi(0) for T_max steps recording both traces, selects t_star by
/// the strategy and returns psi(t_star). The state at t_star is recomputed by
/// a second pass rather than snapshotting every candidate.
SearchResult run_search(const GridGeometry &geom, const MarkedSet &marked, Strategy strategy = {},
                        int workers = 1);

struct Outcome {
    Site site;
    Direction direction;
};

/// Draws computational-basis outcomes with probability |amplitude|^2.
/// Basis indices follow storage order (direction plane, row, column).
class MeasurementSampler {
   public:
    explicit MeasurementSampler(const WalkState &state);
    Outcome sample(Rng &rng) const;

   private:
    GridGeometry geom_;
    std::vector<double> cumulative_;
};

Outcome sample_measurement(const WalkState &state, std::uint64_t rng_seed);

struct PostprocessResult {
    bool found = false;
    std::size_t sites_checked = 0;
};

/// Enumerates the sites around `outcome` in order of increasing distance up
/// to `radius` and stops at the first marked one.
PostprocessResult classical_postprocess(Site outcome, const MarkedSet &marked, const GridGeometry &geom, int radius,
                                        Metric metric = Metric::L1);

/// Upper bound on sites inside an L1 ball: 2r^2 + 2r + 1 (box: (2r+1)^2).
std::size_t ball_size_bound(int radius, Metric metric);

struct SuccessEstimate {
    std::size_t trials = 0;
    std::size_t successes = 0;
    std::size_t max_sites_checked = 0;
    double mean_sites_checked = 0;
    std::vector<Outcome> outcomes;
    std::vector<PostprocessResult> checks;

    double rate() const { return trials ? static_cast<double>(successes) / trials : 0.0; }
};

/// Measure-then-check, `trials` times; trial i uses derive_seed(master_seed, i).
SuccessEstimate estimate_success(const WalkState &state, const MarkedSet &marked, int radius, Metric metric,
                                 std::size_t trials, std::uint64_t master_seed);

struct ScalingRow {
    int n = 0;
    std::size_t t_star = 0;
    double pr0 = 0;
    int radius = 0;
    double nbhd_prob = 0;
    double pr0_ln_n = 0;  ///< Pr[0] * ln N
    std::optional<double> success;
    std::optional<double> mean_sites_checked;
};

struct SweepOptions {
    RadiusRule radius_rule;
    Strategy strategy;
    std::size_t trials = 0;
    std::uint64_t master_seed = 1;
    int workers = 1;
    Site marked{0, 0};
};

ScalingRow scaling_row(const SearchResult &result, const SweepOptions &options);
std::vector<ScalingRow> scaling_sweep(const std::vector<int> &sizes, const SweepOptions &options);

}  // namespace qwalk
