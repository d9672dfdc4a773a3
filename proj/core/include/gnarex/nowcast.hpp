#pragma once

#include "gnarex/decomposition.hpp"
#include "gnarex/model.hpp"

#include <Eigen/Dense>

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gnarex {

/// One data release: monthly industry levels (nodes) and payment flows (edges).
struct ReleaseDataset {
    std::string release_id;
    std::shared_ptr<const StaticNetwork> network;
    Eigen::MatrixXd node_levels;  // K x T, strictly positive
    Eigen::MatrixXd edge_levels;  // M x T, nonnegative
    std::vector<std::string> time_index;

    [[nodiscard]] std::size_t length() const noexcept { return static_cast<std::size_t>(node_levels.cols()); }
    void validate() const;
};

// g_t = x_t / x_{t-1} - 1. Throws DataError on non-positive levels.
std::vector<double> to_growth(std::span<const double> levels);

struct EdgeGrowth {
    std::vector<double> values;
    std::size_t zero_base = 0;  // transitions out of a zero level, set to growth 0
};

// Growth of a payment series; zero levels are allowed.
EdgeGrowth edge_growth(std::span<const double> levels);

// Pearson correlation; nullopt when either series is constant.
std::optional<double> pearson(std::span<const double> a, std::span<const double> b);

enum class CorrelationScope {
    all_nodes,  // max |corr| against every remaining node series
    endpoints,  // only the edge's two endpoints
};

struct SparsificationConfig {
    std::vector<std::string> drop_nodes;
    double corr_threshold = 0.4;
    CorrelationScope scope = CorrelationScope::all_nodes;

    void validate() const;
};

struct SparsifyResult {
    ReleaseDataset release;
    std::vector<std::string> removed_nodes;
    std::vector<std::string> removed_edges;
    std::size_t undefined_correlations = 0;  // pairs with a constant series, treated as 0
};

/**
 * Drops the configured nodes (and their edges), then every edge whose growth
 * series has |corr| > corr_threshold with some remaining node growth series.
 * Nodes left isolated stay in the network.
 */
SparsifyResult sparsify(const ReleaseDataset& release, const SparsificationConfig& cfg);

struct NowcastOptions {
    double level = 0.95;
    int period = 12;
    DecompositionMethod method = DecompositionMethod::moving_average;
    bool baselines = true;
    bool model_average = false;  // equal-weight average over the requested specs
};

struct IndustryNowcast {
    std::string industry;
    double point = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    std::optional<double> actual;
    std::optional<double> relative_error;
};

struct ModelNowcast {
    std::string model;
    std::optional<GnarexSpec> spec;
    double total_forecast = 0.0;
    std::optional<double> total_actual;
    std::optional<double> relative_error;
    std::optional<double> inclusion;  // share of industries inside the interval
    std::vector<IndustryNowcast> industries;
};

struct NowcastReport {
    std::string release_id;
    std::vector<std::string> industries;
    std::size_t edges_after_sparsification = 0;
    std::vector<ModelNowcast> gnarex;
    std::optional<ModelNowcast> model_average;
    std::vector<ModelNowcast> baselines;
    std::vector<std::string> flags;

    // GNAR-ex spec with the smallest total relative error, if scored.
    [[nodiscard]] const ModelNowcast* best_gnarex() const;
    [[nodiscard]] const ModelNowcast* baseline(const std::string& name) const;
};

inline constexpr const char* kNowcastMa = "MA";
inline constexpr const char* kBaselineAutoArima = "auto_arima";
inline constexpr const char* kBaselineArima010 = "arima_010";
inline constexpr const char* kBaselineArima010Growth = "arima_010_growth";

/**
 * Sparsify, convert to growth rates, deseasonalize every series, fit each
 * GNAR-ex spec on the residuals and nowcast the next month:
 *   growth = residual forecast + next seasonal + last trend value,
 *   level  = last level * (1 + growth),
 * with intervals carried through the same affine map. Baselines are fitted
 * on the raw level series. Scores are filled when `next_actuals` (label ->
 * next-month level) covers every modelled industry.
 */
NowcastReport nowcast_release(const ReleaseDataset& release, const SparsificationConfig& cfg,
                              const std::vector<GnarexSpec>& specs,
                              const std::optional<std::map<std::string, double>>& next_actuals = std::nullopt,
                              const NowcastOptions& options = {});

// Equal-weight average over GNAR-ex(l,[stage]) for l = 1..max_lag.
NowcastReport model_average_release(const ReleaseDataset& release, const SparsificationConfig& cfg,
                                    const std::optional<std::map<std::string, double>>& next_actuals = std::nullopt,
                                    NowcastOptions options = {}, int max_lag = 9, int stage = 1);

struct IndustryErrorSummary {
    std::string industry;
    double mean = 0.0;
    double sd = 0.0;
    std::size_t releases = 0;
    bool sd_undefined = false;  // fewer than two releases; sd reported as 0
};

struct IndustrySummary {
    std::vector<IndustryErrorSummary> industries;
    // release id -> top-k industries by relative error, largest first
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, double>>>> top;
};

// Per-industry mean/sd of relative errors of `model` ("MA" or a spec name).
IndustrySummary industry_summary(const std::vector<NowcastReport>& reports, const std::string& model = kNowcastMa,
                                 std::size_t top_k = 3);

// Relative error scaled by sqrt(T) for sample-size comparability.
double scale_relative_error(double relative_error, std::size_t sample_size);

}  // namespace gnarex
