// qwalk: command-line driver for the grid-search walk simulator and the
// lattice-sum checks.
//
//   qwalk simulate    --n 64 --marked 0,0              profile CSV + result JSON
//   qwalk sweep       --sizes 64,128,256 --radius fourth-root [--trials T]
//   qwalk analytic    --sizes 64,128,256,512           lattice-sum error table
//   qwalk spectrum    --n 8 [--predict-n 64]           eigen verification JSON
//   qwalk postprocess --n 128 --trials 1000            sampled measure-and-check CSV
//   qwalk selftest                                     small-n oracle checks
//   qwalk replay      <output file>                    rerun the embedded config
//
// Every output file embeds the RunConfig that produced it. Default worker
// count comes from QWALK_WORKERS.

#include <chrono>
#include <cmath>
#include <iostream>
#include <numbers>

#include "CLI11.hpp"
#include <fmt/format.h>

#include "qwalk/analytic.h"
#include "qwalk/grid.h"
#include "qwalk/io.h"
#include "qwalk/search.h"
#include "qwalk/spectral.h"
#include "qwalk/walk.h"

namespace {

using namespace qwalk;

/// Exit code 2: an invariant check failed on a produced result.
class InvariantViolation : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

Site parse_site(const std::string &text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw std::invalid_argument("site must look like X,Y, got '" + text + "'");
    }
    try {
        std::size_t used_x = 0, used_y = 0;
        const std::string xs = text.substr(0, comma), ys = text.substr(comma + 1);
        const int x = std::stoi(xs, &used_x);
        const int y = std::stoi(ys, &used_y);
        if (used_x != xs.size() || used_y != ys.size()) {
            throw std::invalid_argument("");
        }
        return {x, y};
    } catch (const std::exception &) {
        throw std::invalid_argument("site must look like X,Y, got '" + text + "'");
    }
}

std::string output(const RunConfig &c, const std::string &key) { return c.outputs.at(key); }

void check(bool ok, const std::string &what) {
    if (!ok) {
        throw InvariantViolation(what);
    }
}

MarkedSet marked_for(const RunConfig &c, const GridGeometry &geom) { return MarkedSet(geom, c.marked); }

int run_simulate(const RunConfig &c) {
    const GridGeometry geom(c.n);
    const MarkedSet marked = marked_for(c, geom);
    const auto start = std::chrono::steady_clock::now();
    const SearchResult res = run_search(geom, marked, Strategy::parse(c.strategy), c.workers);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const double norm_sq = res.final_state.norm_squared();
    check(std::abs(norm_sq - 1.0) < 1e-8, fmt::format("norm drift {:.3e}", norm_sq - 1.0));
    check(std::abs(res.profile.total() - 1.0) < 1e-9, "profile does not sum to 1");

    write_text(output(c, "profile_csv"), profile_csv(res.profile, c));
    write_text(output(c, "result_json"), result_json(res, c).dump(2) + "\n");
    const int radius = RadiusRule::parse(c.radius_rule).radius(geom);
    std::cout << fmt::format("n={} t_max={} t_star={} pr0={:.6g} nbhd(r={})={:.6g}\n", c.n, res.t_max, res.t_star,
                             res.marked_probability(), radius,
                             neighborhood_probability(res.final_state, marked, radius,
                                                      RadiusRule::parse(c.radius_rule).metric()));
    std::cerr << fmt::format("evolution took {:.2f}s\n", secs);
    return 0;
}

int run_sweep(const RunConfig &c) {
    SweepOptions opts;
    opts.radius_rule = RadiusRule::parse(c.radius_rule);
    opts.strategy = Strategy::parse(c.strategy);
    opts.trials = c.trials;
    opts.master_seed = c.master_seed;
    opts.workers = c.workers;
    if (c.marked.size() != 1) {
        throw std::invalid_argument("sweep takes exactly one marked site");
    }
    opts.marked = c.marked[0];
    const auto rows = scaling_sweep(c.sizes, opts);
    write_text(output(c, "sweep_csv"), sweep_csv(rows, c));
    for (const auto &r : rows) {
        std::cout << fmt::format("n={} t_star={} pr0={:.6g} nbhd={:.6g} pr0*lnN={:.6g}", r.n, r.t_star, r.pr0,
                                 r.nbhd_prob, r.pr0_ln_n);
        if (r.success) {
            std::cout << fmt::format(" success={:.4f}", *r.success);
        }
        std::cout << "\n";
    }
    return 0;
}

int run_analytic(const RunConfig &c) {
    std::vector<AnalyticRow> rows;
    const double half_pi = std::numbers::pi / 2.0;
    for (int n : c.sizes) {
        const GridGeometry geom(n);
        const FTable f = FTable::build(geom, Kernel::Lattice);
        const FTable fp = FTable::build(geom, Kernel::Continuum);
        rows.push_back({"continuum_gap_constant", n, 0, 0, 0, 0, continuum_gap_constant(f, fp), 0.5, 0});
        const int m = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
        const double amp = ampsum_ratio(f, m);
        rows.push_back({"ampsum_ratio", n, 0, 0, m, m, amp, 0, 0});
        const double ln_n = std::log(static_cast<double>(n));
        const double p1 = harmonic_cosine_sum(n);
        rows.push_back({"harmonic_cosine", n, 0, 0, 1, 0, p1, ln_n, p1 - ln_n});
        for (double eps : c.epsilons) {
            const double p2 = scaled_harmonic_cosine_sum(n, eps);
            rows.push_back({"scaled_harmonic_cosine", n, eps, 0, 0, 0, p2, (1 - eps) * ln_n, p2 - (1 - eps) * ln_n});
            for (double beta : c.betas) {
                const LogAsymptotePoint p = log_asymptote_point(n, eps, beta);
                rows.push_back({"log_asymptote", n, eps, beta, p.j, p.jp, p.f_prime,
                                half_pi * std::log(static_cast<double>(n) / static_cast<double>(p.j)), p.error});
            }
        }
        std::cerr << fmt::format("n={} done\n", n);
    }
    write_text(output(c, "analytic_csv"), analytic_csv(rows, c));
    if (c.outputs.contains("ftable_csv")) {
        const GridGeometry geom(c.n);
        write_text(output(c, "ftable_csv"),
                   ftable_csv(FTable::build(geom), FTable::build(geom, Kernel::Continuum), 16, c));
    }
    std::cout << fmt::format("{} rows written to {}\n", rows.size(), output(c, "analytic_csv"));
    return 0;
}

int run_spectrum(const RunConfig &c) {
    const GridGeometry geom(c.n);
    const auto residuals = eigen_residuals(geom);
    std::optional<SpectrumComparison> dense;
    if (c.n <= 16) {
        dense = compare_spectrum(geom);
    }
    std::optional<PredictionComparison> pred;
    if (!c.sizes.empty()) {
        const GridGeometry pgeom(c.sizes.front());
        const SearchResult res = run_search(pgeom, MarkedSet(pgeom, {{0, 0}}), Strategy::parse(c.strategy), c.workers);
        pred = compare_prediction(res, FTable::build(pgeom));
    }
    const auto report = spectrum_json(geom, residuals, dense ? &*dense : nullptr, pred ? &*pred : nullptr, c);
    write_text(output(c, "spectrum_json"), report.dump(2) + "\n");
    double worst = 0;
    for (const auto &r : residuals) {
        worst = std::max(worst, r.residual);
    }
    std::cout << fmt::format("n={} pairs={} max eigen residual={:.3e}", c.n, residuals.size() / 2, worst);
    if (dense) {
        std::cout << fmt::format(" dense phase error={:.3e} complete={}", dense->max_phase_error, dense->complete);
    }
    if (pred) {
        std::cout << fmt::format(" prediction overlap={:.4f}", pred->overlap);
    }
    std::cout << "\n";
    check(worst < 1e-10, "eigen relation residual above 1e-10");
    check(!dense || dense->complete, "dense spectrum does not match the closed form");
    return 0;
}

int run_postprocess(const RunConfig &c) {
    const GridGeometry geom(c.n);
    const MarkedSet marked = marked_for(c, geom);
    const RadiusRule rule = RadiusRule::parse(c.radius_rule);
    const int radius = rule.radius(geom);
    const SearchResult res = run_search(geom, marked, Strategy::parse(c.strategy), c.workers);
    const SuccessEstimate est = estimate_success(res.final_state, marked, radius, rule.metric(), c.trials,
                                                 c.master_seed);
    write_text(output(c, "postprocess_csv"), postprocess_csv(res, est, rule.metric(), c));
    const double exact = neighborhood_probability(res.final_state, marked, radius, rule.metric());
    std::cout << fmt::format("n={} t_star={} radius={} trials={} success={:.4f} exact={:.4f} max_checked={} bound={}\n",
                             c.n, res.t_star, radius, est.trials, est.rate(), exact, est.max_sites_checked,
                             ball_size_bound(radius, rule.metric()));
    check(est.max_sites_checked <= ball_size_bound(radius, rule.metric()), "post-processing exceeded ball size");
    return 0;
}

int run_selftest() {
    int failures = 0;
    auto expect = [&](bool ok, const std::string &name) {
        std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
        failures += ok ? 0 : 1;
    };

    for (int n : {2, 4}) {
        const GridGeometry geom(n);
        const Eigen::MatrixXcd u = dense_step_operator(geom);
        Rng rng(derive_seed(7, static_cast<std::uint64_t>(n)));
        double worst = 0;
        for (int trial = 0; trial < 5; ++trial) {
            WalkState s(geom);
            for (Complex &a : s.amplitudes()) {
                a = {uniform01(rng) - 0.5, uniform01(rng) - 0.5};
            }
            const Eigen::VectorXcd expected = u * to_vector(s);
            const WalkState got = step(s, MarkedSet{});
            worst = std::max(worst, (to_vector(got) - expected).cwiseAbs().maxCoeff());
        }
        expect(worst < 1e-12, fmt::format("dense step agrees with in-place step, n={}", n));
    }
    {
        const GridGeometry geom(8);
        const WalkState psi0 = uniform_state(geom);
        const WalkState later = run(psi0, MarkedSet{}, 200);
        expect(max_abs_difference(psi0, later) < 1e-9, "uniform state is stationary without marks");
        const WalkState marked = run(psi0, MarkedSet(geom, {{3, 5}}), 500);
        expect(std::abs(marked.norm_squared() - 1.0) < 1e-12, "norm preserved with a marked site");
    }
    {
        const GridGeometry geom(4);
        double worst = 0;
        for (const auto &r : eigen_residuals(geom)) {
            worst = std::max(worst, r.residual);
        }
        expect(worst < 1e-10, "eigenvectors satisfy the eigen relation, n=4");
        expect(compare_spectrum(geom).complete, "dense spectrum matches closed-form phases, n=4");
    }
    expect(std::abs(eval_f(GridGeometry(2), 0, 0) - 1.25) < 1e-14, "f(0,0) = 5/4 on the 2x2 grid");
    expect(std::abs(eval_f_prime(GridGeometry(2), 0, 0) - 2.5) < 1e-14, "f'(0,0) = 5/2 on the 2x2 grid");
    {
        const GridGeometry geom(16);
        const FTable t = FTable::build(geom);
        expect(std::abs(t.at(3, 5) - eval_f(geom, 3, 5)) < 1e-9, "table f agrees with direct sum");
    }
    std::cout << (failures ? fmt::format("{} selftest check(s) failed\n", failures) : "selftest passed\n");
    return failures ? 2 : 0;
}

int execute(const RunConfig &c) {
    if (c.subcommand == "simulate") return run_simulate(c);
    if (c.subcommand == "sweep") return run_sweep(c);
    if (c.subcommand == "analytic") return run_analytic(c);
    if (c.subcommand == "spectrum") return run_spectrum(c);
    if (c.subcommand == "postprocess") return run_postprocess(c);
    if (c.subcommand == "selftest") return run_selftest();
    throw std::invalid_argument("unknown subcommand '" + c.subcommand + "'");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum-walk search on the 2D torus: simulation and lattice-sum checks"};
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.workers = default_workers();
    std::vector<std::string> marked_text;
    std::string out_dir = "out";
    std::string replay_path;

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--workers", cfg.workers, "worker threads (default: $QWALK_WORKERS or 1)")
            ->check(CLI::Range(1, 1024));
        sub->add_option("--out-dir", out_dir, "directory for output files")->capture_default_str();
    };
    auto add_marked = [&](CLI::App *sub) {
        sub->add_option("--marked", marked_text, "marked site X,Y (repeatable)")->capture_default_str();
        sub->add_option("--strategy", cfg.strategy, "max-marked-prob | min-overlap | fixed:T")
            ->capture_default_str();
    };

    auto *simulate = app.add_subcommand("simulate", "one search run: profile CSV and result JSON");
    simulate->add_option("--n", cfg.n, "grid side (even)")->capture_default_str();
    simulate->add_option("--radius", cfg.radius_rule, "neighbourhood rule for the summary line")
        ->capture_default_str();
    add_marked(simulate);
    add_common(simulate);

    auto *sweep = app.add_subcommand("sweep", "scaling table across grid sizes");
    sweep->add_option("--sizes", cfg.sizes, "grid sides")->delimiter(',')->required();
    sweep->add_option("--radius", cfg.radius_rule, "fourth-root | epsilon-box:E | step-count")
        ->capture_default_str();
    sweep->add_option("--trials", cfg.trials, "sampled measure-and-check trials per size")->capture_default_str();
    sweep->add_option("--seed", cfg.master_seed, "master seed")->capture_default_str();
    add_marked(sweep);
    add_common(sweep);

    auto *analytic = app.add_subcommand("analytic", "lattice-sum error sweeps");
    analytic->add_option("--sizes", cfg.sizes, "size ladder")->delimiter(',');
    analytic->add_option("--epsilons", cfg.epsilons, "exponents")->delimiter(',');
    analytic->add_option("--betas", cfg.betas, "aspect ratios j'/j")->delimiter(',');
    analytic->add_option("--table-n", cfg.n, "also dump f, f', g for j, j' < 16 on this grid");
    add_common(analytic);

    auto *spectrum = app.add_subcommand("spectrum", "eigenvector verification and prediction comparison");
    spectrum->add_option("--n", cfg.n, "grid side for the eigen checks (dense oracle when <= 16)")
        ->capture_default_str();
    spectrum->add_option("--predict-n", cfg.sizes, "grid side for the final-state prediction comparison")
        ->expected(0, 1);
    spectrum->add_option("--strategy", cfg.strategy, "stopping rule for the prediction run")->capture_default_str();
    add_common(spectrum);

    auto *postprocess = app.add_subcommand("postprocess", "sampled measurement + classical neighbourhood check");
    postprocess->add_option("--n", cfg.n, "grid side")->capture_default_str();
    postprocess->add_option("--trials", cfg.trials, "trials")->capture_default_str();
    postprocess->add_option("--seed", cfg.master_seed, "master seed")->capture_default_str();
    postprocess->add_option("--radius", cfg.radius_rule, "neighbourhood rule")->capture_default_str();
    add_marked(postprocess);
    add_common(postprocess);

    app.add_subcommand("selftest", "small-n oracle suite");

    auto *replay = app.add_subcommand("replay", "rerun the config embedded in an output file");
    replay->add_option("file", replay_path, "CSV or JSON produced by qwalk")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (replay->parsed()) {
            return execute(load_config(replay_path));
        }
        cfg.subcommand = app.get_subcommands().front()->get_name();
        if (!marked_text.empty()) {
            cfg.marked.clear();
            for (const auto &m : marked_text) {
                cfg.marked.push_back(parse_site(m));
            }
        }
        const std::filesystem::path dir(out_dir);
        const std::string tag = std::to_string(cfg.n);
        if (cfg.subcommand == "simulate") {
            cfg.outputs = {{"profile_csv", (dir / ("profile_n" + tag + ".csv")).string()},
                           {"result_json", (dir / ("result_n" + tag + ".json")).string()}};
        } else if (cfg.subcommand == "sweep") {
            cfg.outputs = {{"sweep_csv", (dir / "sweep.csv").string()}};
        } else if (cfg.subcommand == "analytic") {
            if (cfg.sizes.empty()) cfg.sizes = {64, 128, 256, 512};
            if (cfg.epsilons.empty()) cfg.epsilons = {0.25, 0.5, 0.75};
            if (cfg.betas.empty()) cfg.betas = {1.0, 0.5};
            cfg.outputs = {{"analytic_csv", (dir / "analytic.csv").string()}};
            if (analytic->count("--table-n")) {
                cfg.outputs["ftable_csv"] = (dir / ("ftable_n" + tag + ".csv")).string();
            }
        } else if (cfg.subcommand == "spectrum") {
            cfg.outputs = {{"spectrum_json", (dir / ("spectrum_n" + tag + ".json")).string()}};
        } else if (cfg.subcommand == "postprocess") {
            cfg.outputs = {{"postprocess_csv", (dir / ("postprocess_n" + tag + ".csv")).string()}};
        }
        return execute(cfg);
    } catch (const InvariantViolation &e) {
        std::cerr << "invariant violated: " << e.what() << "\n";
        return 2;
    } catch (const ResourceLimitError &e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 64;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
