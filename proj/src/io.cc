#include "qwalk/io.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

namespace qwalk {

using nlohmann::json;

void to_json(json &j, const RunConfig &c) {
    json marked = json::array();
    for (const Site &s : c.marked) {
        marked.push_back({s.x, s.y});
    }
    j = json{{"subcommand", c.subcommand},
             {"n", c.n},
             {"sizes", c.sizes},
             {"marked", marked},
             {"strategy", c.strategy},
             {"radius_rule", c.radius_rule},
             {"epsilons", c.epsilons},
             {"betas", c.betas},
             {"trials", c.trials},
             {"master_seed", c.master_seed},
             {"workers", c.workers},
             {"outputs", c.outputs}};
}

void from_json(const json &j, RunConfig &c) {
    RunConfig d;
    c.subcommand = j.value("subcommand", d.subcommand);
    c.n = j.value("n", d.n);
    c.sizes = j.value("sizes", d.sizes);
    c.marked.clear();
    if (j.contains("marked")) {
        for (const auto &m : j.at("marked")) {
            c.marked.push_back({m.at(0).get<int>(), m.at(1).get<int>()});
        }
    } else {
        c.marked = d.marked;
    }
    c.strategy = j.value("strategy", d.strategy);
    c.radius_rule = j.value("radius_rule", d.radius_rule);
    c.epsilons = j.value("epsilons", d.epsilons);
    c.betas = j.value("betas", d.betas);
    c.trials = j.value("trials", d.trials);
    c.master_seed = j.value("master_seed", d.master_seed);
    c.workers = j.value("workers", d.workers);
    c.outputs = j.value("outputs", d.outputs);
}

RunConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const std::string marker = "# config: ";
    if (const auto pos = text.find(marker); pos != std::string::npos && (pos == 0 || text[pos - 1] == '\n')) {
        const auto end = text.find('\n', pos);
        return json::parse(text.substr(pos + marker.size(), end - pos - marker.size())).get<RunConfig>();
    }
    const json j = json::parse(text);
    return j.contains("config") ? j.at("config").get<RunConfig>() : j.get<RunConfig>();
}

int default_workers() {
    if (const char *env = std::getenv("QWALK_WORKERS")) {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 1024) {
            return static_cast<int>(v);
        }
    }
    return 1;
}

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

std::string csv_preamble(const std::string &kind, const RunConfig &config) {
    return fmt::format("# schema: qwalk.{}/{}\n# config: {}\n", kind, kSchemaVersion, json(config).dump());
}

std::string profile_csv(const DistanceProfile &profile, const RunConfig &config) {
    std::string out = csv_preamble("profile", config);
    out += "radius,site_count,total_prob,mean_prob\n";
    for (std::size_t r = 0; r < profile.total_prob.size(); ++r) {
        out += fmt::format("{},{},{},{}\n", r, profile.site_count[r], format_real(profile.total_prob[r]),
                           format_real(profile.mean_prob[r]));
    }
    return out;
}

std::string sweep_csv(const std::vector<ScalingRow> &rows, const RunConfig &config) {
    const bool with_success = config.trials > 0;
    std::string out = csv_preamble("sweep", config);
    out += with_success ? "n,t_star,pr0,nbhd_prob,pr0_lnN,success\n" : "n,t_star,pr0,nbhd_prob,pr0_lnN\n";
    for (const ScalingRow &r : rows) {
        out += fmt::format("{},{},{},{},{}", r.n, r.t_star, format_real(r.pr0), format_real(r.nbhd_prob),
                           format_real(r.pr0_ln_n));
        if (with_success) {
            out += "," + format_real(r.success.value_or(0.0));
        }
        out += "\n";
    }
    return out;
}

std::string postprocess_csv(const SearchResult &search, const SuccessEstimate &estimate, Metric metric,
                            const RunConfig &config) {
    std::string out = csv_preamble("postprocess", config);
    out += "trial,x,y,direction,distance,found,sites_checked\n";
    for (std::size_t i = 0; i < estimate.outcomes.size(); ++i) {
        const Outcome &o = estimate.outcomes[i];
        const PostprocessResult &c = estimate.checks[i];
        out += fmt::format("{},{},{},{},{},{},{}\n", i, o.site.x, o.site.y, direction_name(o.direction),
                           search.marked.distance_to(o.site, search.geometry, metric), c.found ? 1 : 0,
                           c.sites_checked);
    }
    return out;
}

std::string analytic_csv(const std::vector<AnalyticRow> &rows, const RunConfig &config) {
    std::string out = csv_preamble("analytic", config);
    out += "quantity,n,epsilon,beta,j,jp,value,reference,error\n";
    for (const AnalyticRow &r : rows) {
        out += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.quantity, r.n, format_real(r.epsilon),
                           format_real(r.beta), r.j, r.jp, format_real(r.value), format_real(r.reference),
                           format_real(r.error));
    }
    return out;
}

std::string ftable_csv(const FTable &f, const FTable &f_prime, int limit, const RunConfig &config) {
    std::string out = csv_preamble("ftable", config);
    out += "j,jp,f,f_prime,g\n";
    const int n = f.geometry().n();
    const int m = std::min(limit, n);
    for (int j = 0; j < m; ++j) {
        for (int jp = 0; jp < m; ++jp) {
            out += fmt::format("{},{},{},{},{}\n", j, jp, format_real(f.at(j, jp)), format_real(f_prime.at(j, jp)),
                               format_real(f.g(j, jp)));
        }
    }
    return out;
}

json result_json(const SearchResult &search, const RunConfig &config) {
    json marked = json::array();
    for (const Site &s : search.marked.sites()) {
        marked.push_back({s.x, s.y});
    }
    return json{{"schema", fmt::format("qwalk.result/{}", kSchemaVersion)},
                {"config", config},
                {"n", search.geometry.n()},
                {"marked", marked},
                {"strategy", search.strategy.to_string()},
                {"t_max", search.t_max},
                {"t_star", search.t_star},
                {"pr0", search.marked_probability()},
                {"profile_total", search.profile.total()},
                {"final_norm_sq", search.final_state.norm_squared()},
                {"overlap_trace", search.overlap_trace},
                {"marked_prob_trace", search.marked_prob_trace}};
}

PredictionComparison compare_prediction(const SearchResult &search, const FTable &f) {
    const GridGeometry &geom = search.geometry;
    if (search.marked.size() != 1) {
        throw std::invalid_argument("prediction comparison needs a single marked site");
    }
    const Site marked = search.marked.sites()[0];
    PredictionComparison cmp;
    cmp.n = geom.n();
    cmp.t_star = search.t_star;

    const FinalStatePrediction pred = predict_final_state(geom, marked);
    cmp.prediction_norm = pred.norm;
    cmp.norm_sq_over_ln_n = pred.norm * pred.norm / std::log(static_cast<double>(geom.sites()));
    cmp.overlap = std::abs(overlap(pred.normalized(), search.final_state));
    cmp.overlap_literal =
        std::abs(overlap(predict_final_state(geom, marked, CotSign::Literal).normalized(), search.final_state));

    // With the MatchesWalk orientation the up-plane at offset (dx, dy) != 0 is
    // exactly 1/(2N) + g(dy, dx) / N.
    const double big_n = static_cast<double>(geom.sites());
    cmp.constant_term = 1.0 / (2.0 * big_n);
    const auto up = pred.state.plane(Direction::Up);
    double worst = 0, scale = 0;
    for (std::size_t i = 0; i < geom.sites(); ++i) {
        const Site s = geom.site_at(i);
        if (s == marked) {
            continue;
        }
        const int dx = wrap(s.x - marked.x, geom.n());
        const int dy = wrap(s.y - marked.y, geom.n());
        const double expected = f.g(dy, dx) / big_n;
        worst = std::max(worst, std::abs(up[i] - cmp.constant_term - expected));
        scale = std::max(scale, std::abs(expected));
    }
    cmp.up_plane_max_rel_residual = worst / scale;

    if (marked == Site{0, 0}) {
        cmp.fit = amplitude_fit(search, f);
    }
    return cmp;
}

json spectrum_json(const GridGeometry &geom, const std::vector<EigenResidual> &residuals,
                   const SpectrumComparison *spectrum, const PredictionComparison *prediction,
                   const RunConfig &config) {
    json pairs = json::array();
    double worst = 0;
    for (const EigenResidual &r : residuals) {
        pairs.push_back({{"k", r.k},
                         {"l", r.l},
                         {"branch", r.branch == Branch::Plus ? "+" : "-"},
                         {"theta", r.theta},
                         {"residual", r.residual}});
        worst = std::max(worst, r.residual);
    }
    json out{{"schema", fmt::format("qwalk.spectrum/{}", kSchemaVersion)},
             {"config", config},
             {"n", geom.n()},
             {"eigen_relation", {{"max_residual", worst}, {"pairs", pairs}}}};
    if (spectrum) {
        out["dense_spectrum"] = {{"dimension", spectrum->dimension},
                                 {"nondegenerate_pairs", spectrum->nondegenerate_pairs},
                                 {"plus_one", spectrum->plus_one},
                                 {"minus_one", spectrum->minus_one},
                                 {"max_phase_error", spectrum->max_phase_error},
                                 {"unitarity_error", spectrum->unitarity_error},
                                 {"complete", spectrum->complete}};
    }
    if (prediction) {
        json regions = json::array();
        for (const RegionCheck &r : prediction->fit.regions) {
            regions.push_back({{"name", r.name},
                               {"sites", r.sites},
                               {"simulated", r.simulated},
                               {"predicted", r.predicted},
                               {"ratio", r.ratio()}});
        }
        out["prediction"] = {{"t_star", prediction->t_star},
                             {"overlap", prediction->overlap},
                             {"overlap_literal_sign", prediction->overlap_literal},
                             {"norm", prediction->prediction_norm},
                             {"norm_sq_over_lnN", prediction->norm_sq_over_ln_n},
                             {"up_plane_max_rel_residual", prediction->up_plane_max_rel_residual},
                             {"constant_term", prediction->constant_term},
                             {"amplitude_fit",
                              {{"correlation", prediction->fit.correlation},
                               {"c_hat", prediction->fit.c_hat},
                               {"c_scaled", prediction->fit.c_scaled},
                               {"band", {prediction->fit.min_distance, prediction->fit.max_distance}},
                               {"regions", regions}}}};
    }
    return out;
}

void write_text(const std::filesystem::path &path, const std::string &content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << content;
    if (!out) {
        throw std::runtime_error("short write on " + path.string());
    }
}

}  // namespace qwalk
