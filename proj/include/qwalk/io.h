#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "qwalk/analytic.h"
#include "qwalk/search.h"
#include "qwalk/spectral.h"

namespace qwalk {

inline constexpr int kSchemaVersion = 1;

/// Everything needed to reproduce a CLI run. Embedded in every output file.
struct RunConfig {
    std::string subcommand;
    int n = 64;
    std::vector<int> sizes;
    std::vector<Site> marked{{0, 0}};
    std::string strategy = "max-marked-prob";
    std::string radius_rule = "fourth-root";
    std::vector<double> epsilons;
    std::vector<double> betas;
    std::size_t trials = 0;
    std::uint64_t master_seed = 1;
    int workers = 1;
    std::map<std::string, std::string> outputs;
};

void to_json(nlohmann::json &j, const RunConfig &c);
void from_json(const nlohmann::json &j, RunConfig &c);

/// Reads a config from a bare config JSON, from the "config" member of an
/// output JSON, or from the "# config:" line of an output CSV.
RunConfig load_config(const std::filesystem::path &path);

/// Worker count from QWALK_WORKERS, or 1 when unset or invalid.
int default_workers();

/// Shortest exact round-trip text for a double ("%.17g").
std::string format_real(double v);

/// "# schema: qwalk.<kind>/<version>" and "# config: <json>" lines.
std::string csv_preamble(const std::string &kind, const RunConfig &config);

// CSV bodies: '.' decimals, LF endings, header row first after the preamble.
std::string profile_csv(const DistanceProfile &profile, const RunConfig &config);
std::string sweep_csv(const std::vector<ScalingRow> &rows, const RunConfig &config);
std::string postprocess_csv(const SearchResult &search, const SuccessEstimate &estimate, Metric metric,
                            const RunConfig &config);

struct AnalyticRow {
    std::string quantity;
    int n = 0;
    double epsilon = 0;
    double beta = 0;
    long long j = 0;
    long long jp = 0;
    double value = 0;
    double reference = 0;
    double error = 0;
};
std::string analytic_csv(const std::vector<AnalyticRow> &rows, const RunConfig &config);
std::string ftable_csv(const FTable &f, const FTable &f_prime, int limit, const RunConfig &config);

nlohmann::json result_json(const SearchResult &search, const RunConfig &config);

struct PredictionComparison {
    int n = 0;
    std::size_t t_star = 0;
    double overlap = 0;           ///< |<normalized prediction | psi(t_star)>|
    double overlap_literal = 0;   ///< same with CotSign::Literal
    double prediction_norm = 0;
    double norm_sq_over_ln_n = 0;
    double up_plane_max_rel_residual = 0;  ///< up-plane vs g(dy, dx) / N after removing the constant term
    double constant_term = 0;              ///< the removed constant, 1/(2N)
    AmplitudeFitReport fit;
};

PredictionComparison compare_prediction(const SearchResult &search, const FTable &f);

nlohmann::json spectrum_json(const GridGeometry &geom, const std::vector<EigenResidual> &residuals,
                             const SpectrumComparison *spectrum, const PredictionComparison *prediction,
                             const RunConfig &config);

void write_text(const std::filesystem::path &path, const std::string &content);

}  // namespace qwalk
