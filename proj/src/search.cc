#include "qwalk/search.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qwalk {

std::string Strategy::to_string() const {
    switch (rule) {
        case Rule::MaxMarkedProb: return "max-marked-prob";
        case Rule::MinOverlap: return "min-overlap";
        case Rule::FixedT: return "fixed:" + std::to_string(fixed_t);
    }
    return "?";
}

Strategy Strategy::parse(const std::string &text) {
    if (text == "max-marked-prob") {
        return max_marked_prob();
    }
    if (text == "min-overlap") {
        return min_overlap();
    }
    if (text.rfind("fixed:", 0) == 0) {
        const std::string num = text.substr(6);
        if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos) {
            throw std::invalid_argument("bad fixed step count in strategy '" + text + "'");
        }
        return fixed(std::stoull(num));
    }
    throw std::invalid_argument("unknown strategy '" + text + "' (max-marked-prob | min-overlap | fixed:T)");
}

std::size_t max_steps(const GridGeometry &geom) {
    const double big_n = static_cast<double>(geom.sites());
    return static_cast<std::size_t>(std::ceil(2.0 * std::sqrt(big_n * std::log(big_n))));
}

long long ceil_power(double base, double exponent) {
    const double v = std::pow(base, exponent);
    const double r = std::round(v);
    if (std::abs(v - r) <= 1e-9 * std::max(1.0, v)) {
        return static_cast<long long>(r);
    }
    return static_cast<long long>(std::ceil(v));
}

int RadiusRule::radius(const GridGeometry &geom) const {
    const double big_n = static_cast<double>(geom.sites());
    switch (kind) {
        case Kind::FourthRoot: return static_cast<int>(ceil_power(big_n, 0.25));
        case Kind::EpsilonBox: return static_cast<int>(ceil_power(big_n, epsilon));
        case Kind::StepCount: return static_cast<int>(ceil_power(big_n * std::log(big_n), 0.25));
    }
    return 0;
}

std::string RadiusRule::to_string() const {
    switch (kind) {
        case Kind::FourthRoot: return "fourth-root";
        case Kind::EpsilonBox: {
            std::string eps = std::to_string(epsilon);
            eps.erase(eps.find_last_not_of('0') + 1);
            if (eps.back() == '.') {
                eps.pop_back();
            }
            return "epsilon-box:" + eps;
        }
        case Kind::StepCount: return "step-count";
    }
    return "?";
}

RadiusRule RadiusRule::parse(const std::string &text) {
    if (text == "fourth-root") {
        return fourth_root();
    }
    if (text == "step-count") {
        return step_count();
    }
    if (text.rfind("epsilon-box:", 0) == 0) {
        std::size_t used = 0;
        const std::string num = text.substr(12);
        double eps = 0;
        try {
            eps = std::stod(num, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != num.size() || !(eps > 0.0 && eps < 1.0)) {
            throw std::invalid_argument("epsilon-box needs 0 < epsilon < 1, got '" + num + "'");
        }
        return epsilon_box(eps);
    }
    throw std::invalid_argument("unknown radius rule '" + text + "' (fourth-root | epsilon-box:E | step-count)");
}

double DistanceProfile::total() const { return std::accumulate(total_prob.begin(), total_prob.end(), 0.0); }

namespace {

template <typename DistanceFn>
DistanceProfile build_profile(const WalkState &state, DistanceFn distance) {
    const GridGeometry &geom = state.geometry();
    DistanceProfile p;
    const std::size_t radii = static_cast<std::size_t>(geom.n()) + 1;
    p.total_prob.assign(radii, 0.0);
    p.site_count.assign(radii, 0);
    p.mean_prob.assign(radii, 0.0);
    const std::vector<double> probs = site_probabilities(state);
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const auto r = static_cast<std::size_t>(distance(geom.site_at(i)));
        p.total_prob[r] += probs[i];
        p.site_count[r] += 1;
    }
    std::size_t last = radii;
    while (last > 1 && p.site_count[last - 1] == 0) {
        --last;
    }
    p.total_prob.resize(last);
    p.site_count.resize(last);
    p.mean_prob.resize(last);
    for (std::size_t r = 0; r < last; ++r) {
        p.mean_prob[r] = p.site_count[r] ? p.total_prob[r] / static_cast<double>(p.site_count[r]) : 0.0;
    }
    return p;
}

}  // namespace

DistanceProfile distance_profile(const WalkState &state, Site center) {
    const GridGeometry &geom = state.geometry();
    if (!geom.contains(center)) {
        throw std::invalid_argument("profile centre outside grid");
    }
    return build_profile(state, [&](Site s) { return torus_l1_distance(s, center, geom); });
}

DistanceProfile distance_profile(const WalkState &state, const MarkedSet &marked) {
    if (marked.empty()) {
        throw std::invalid_argument("distance profile needs at least one marked site");
    }
    const GridGeometry &geom = state.geometry();
    return build_profile(state, [&](Site s) { return marked.distance_to(s, geom); });
}

double neighborhood_probability(const WalkState &state, Site center, int radius, Metric metric) {
    if (radius < 0) {
        throw std::invalid_argument("negative neighbourhood radius");
    }
    const GridGeometry &geom = state.geometry();
    const std::vector<double> probs = site_probabilities(state);
    double p = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (torus_distance(geom.site_at(i), center, geom, metric) <= radius) {
            p += probs[i];
        }
    }
    return p;
}

double neighborhood_probability(const WalkState &state, const MarkedSet &marked, int radius, Metric metric) {
    if (radius < 0) {
        throw std::invalid_argument("negative neighbourhood radius");
    }
    const GridGeometry &geom = state.geometry();
    const std::vector<double> probs = site_probabilities(state);
    double p = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const int d = marked.distance_to(geom.site_at(i), geom, metric);
        if (d >= 0 && d <= radius) {
            p += probs[i];
        }
    }
    return p;
}

double log_log_slope(const DistanceProfile &profile, int lo, int hi) {
    if (lo < 1 || hi <= lo || hi > profile.max_radius()) {
        throw std::invalid_argument("slope range must satisfy 1 <= lo < hi <= max radius");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (int r = lo; r <= hi; ++r) {
        const double m = profile.mean_prob[static_cast<std::size_t>(r)];
        if (!(m > 0)) {
            throw std::domain_error("zero mean probability at radius " + std::to_string(r));
        }
        const double x = std::log(static_cast<double>(r));
        const double y = std::log(m);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

SearchResult run_search(const GridGeometry &geom, const MarkedSet &marked, Strategy strategy, int workers) {
    if (marked.empty()) {
        throw std::invalid_argument("search needs at least one marked site");
    }
    const std::size_t t_max = max_steps(geom);
    if (strategy.rule == Strategy::Rule::FixedT && strategy.fixed_t > t_max) {
        throw std::invalid_argument("fixed step count " + std::to_string(strategy.fixed_t) + " exceeds T_max " +
                                    std::to_string(t_max));
    }

    Walker walker(geom, marked, workers);
    OverlapTrace overlaps;
    MarkedProbabilityTrace marked_probs(marked);
    std::optional<WalkState> snapshot;
    std::vector<StepObserver> observers{overlaps.observer(), marked_probs.observer()};
    if (strategy.rule == Strategy::Rule::FixedT) {
        const std::size_t target = strategy.fixed_t;
        observers.push_back([&snapshot, target](std::size_t t, const WalkState &s) {
            if (t == target) {
                snapshot = s;
            }
        });
    }

    WalkState state = uniform_state(geom);
    if (strategy.rule == Strategy::Rule::FixedT && strategy.fixed_t == 0) {
        snapshot = state;
    }
    walker.run(state, t_max, observers);

    std::size_t t_star = 0;
    const auto &mp = marked_probs.values();
    const auto &ov = overlaps.values();
    switch (strategy.rule) {
        case Strategy::Rule::MaxMarkedProb:
            t_star = static_cast<std::size_t>(std::max_element(mp.begin(), mp.end()) - mp.begin()) + 1;
            break;
        case Strategy::Rule::MinOverlap:
            t_star = static_cast<std::size_t>(std::min_element(ov.begin(), ov.end()) - ov.begin()) + 1;
            break;
        case Strategy::Rule::FixedT: t_star = strategy.fixed_t; break;
    }

    WalkState final_state = [&] {
        if (snapshot) {
            return std::move(*snapshot);
        }
        if (t_star == t_max) {
            return std::move(state);
        }
        WalkState again = uniform_state(geom);
        walker.run(again, t_star);
        return again;
    }();

    DistanceProfile profile = distance_profile(final_state, marked);
    return SearchResult{geom, marked, strategy, t_max, t_star, std::move(final_state), ov, mp, std::move(profile)};
}

MeasurementSampler::MeasurementSampler(const WalkState &state) : geom_(state.geometry()) {
    auto amps = state.amplitudes();
    cumulative_.resize(amps.size());
    double acc = 0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        acc += std::norm(amps[i]);
        cumulative_[i] = acc;
    }
}

Outcome MeasurementSampler::sample(Rng &rng) const {
    // Scale by the actual total so rounding drift in the norm cannot push the
    // draw past the last index.
    const double u = uniform01(rng) * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cumulative_.begin());
    if (idx >= cumulative_.size()) {
        idx = cumulative_.size() - 1;
    }
    const std::size_t plane = geom_.sites();
    return {geom_.site_at(idx % plane), static_cast<Direction>(idx / plane)};
}

Outcome sample_measurement(const WalkState &state, std::uint64_t rng_seed) {
    Rng rng(rng_seed);
    return MeasurementSampler(state).sample(rng);
}

std::size_t ball_size_bound(int radius, Metric metric) {
    const auto r = static_cast<std::size_t>(radius);
    return metric == Metric::L1 ? 2 * r * r + 2 * r + 1 : (2 * r + 1) * (2 * r + 1);
}

PostprocessResult classical_postprocess(Site outcome, const MarkedSet &marked, const GridGeometry &geom, int radius,
                                        Metric metric) {
    if (radius < 0) {
        throw std::invalid_argument("negative post-processing radius");
    }
    if (!geom.contains(outcome)) {
        throw std::invalid_argument("outcome outside grid");
    }
    PostprocessResult res;
    // Offsets only alias modulo n once the ball is at least as wide as the grid.
    const bool may_wrap = 2 * radius >= geom.n();
    std::vector<bool> seen(may_wrap ? geom.sites() : 0, false);
    auto visit = [&](int dx, int dy) {
        const Site s = geom.wrapped(static_cast<long long>(outcome.x) + dx, static_cast<long long>(outcome.y) + dy);
        if (may_wrap) {
            const std::size_t i = geom.site_index(s);
            if (seen[i]) {
                return false;
            }
            seen[i] = true;
        }
        ++res.sites_checked;
        return marked.contains(s);
    };
    for (int d = 0; d <= radius; ++d) {
        if (metric == Metric::L1) {
            for (int dx = -d; dx <= d; ++dx) {
                const int rest = d - std::abs(dx);
                if (visit(dx, rest) || (rest != 0 && visit(dx, -rest))) {
                    res.found = true;
                    return res;
                }
            }
        } else {
            for (int dy = -d; dy <= d; ++dy) {
                for (int dx = -d; dx <= d; ++dx) {
                    if (std::max(std::abs(dx), std::abs(dy)) != d) {
                        continue;
                    }
                    if (visit(dx, dy)) {
                        res.found = true;
                        return res;
                    }
                }
            }
        }
    }
    return res;
}

SuccessEstimate estimate_success(const WalkState &state, const MarkedSet &marked, int radius, Metric metric,
                                 std::size_t trials, std::uint64_t master_seed) {
    SuccessEstimate est;
    est.trials = trials;
    if (trials == 0) {
        return est;
    }
    const MeasurementSampler sampler(state);
    std::size_t checked_total = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        Rng rng(derive_seed(master_seed, i));
        const Outcome o = sampler.sample(rng);
        const PostprocessResult r = classical_postprocess(o.site, marked, state.geometry(), radius, metric);
        est.successes += r.found ? 1 : 0;
        est.max_sites_checked = std::max(est.max_sites_checked, r.sites_checked);
        checked_total += r.sites_checked;
        est.outcomes.push_back(o);
        est.checks.push_back(r);
    }
    est.mean_sites_checked = static_cast<double>(checked_total) / static_cast<double>(trials);
    return est;
}

ScalingRow scaling_row(const SearchResult &result, const SweepOptions &options) {
    const GridGeometry &geom = result.geometry;
    ScalingRow row;
    row.n = geom.n();
    row.t_star = result.t_star;
    row.pr0 = result.marked_probability();
    row.radius = options.radius_rule.radius(geom);
    row.nbhd_prob =
        neighborhood_probability(result.final_state, result.marked, row.radius, options.radius_rule.metric());
    row.pr0_ln_n = row.pr0 * std::log(static_cast<double>(geom.sites()));
    if (options.trials > 0) {
        const SuccessEstimate est = estimate_success(result.final_state, result.marked, row.radius,
                                                     options.radius_rule.metric(), options.trials,
                                                     derive_seed(options.master_seed, static_cast<std::uint64_t>(row.n)));
        row.success = est.rate();
        row.mean_sites_checked = est.mean_sites_checked;
    }
    return row;
}

std::vector<ScalingRow> scaling_sweep(const std::vector<int> &sizes, const SweepOptions &options) {
    std::vector<ScalingRow> rows;
    for (int n : sizes) {
        if (n < 8 || n % 2 != 0) {
            throw std::invalid_argument("sweep sizes must be even and at least 8, got " + std::to_string(n));
        }
        const GridGeometry geom(n);
        const MarkedSet marked(geom, {options.marked});
        rows.push_back(scaling_row(run_search(geom, marked, options.strategy, options.workers), options));
    }
    return rows;
}

}  // namespace qwalk
