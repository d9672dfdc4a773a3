#pragma once

#include "gnarex/model.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace gnarex {

enum class GraphKind { erdos_renyi, stochastic_block, random_dot_product };

std::string to_string(GraphKind kind);
GraphKind parse_graph_kind(const std::string& name);  // "er", "sbm", "rdp"

/**
 * Random directed graph model calibrated to a target density. Every ordered
 * pair (i, j), i != j, is an independent Bernoulli draw.
 *
 *  - ER:  constant probability p.
 *  - SBM: equal blocks, within-block probability `block_ratio` times the
 *         between-block probability.
 *  - RDP: latent vectors uniform on [0, s]^2, edge probability
 *         min(1, <x_i, x_j>); s is solved so the expected clamped dot product
 *         equals the target density.
 */
struct GraphModel {
    GraphKind kind = GraphKind::erdos_renyi;
    std::size_t node_count = 20;
    double target_density = 0.4;

    double p = 0.4;  // ER

    std::vector<std::size_t> block_sizes;  // SBM
    double p_within = 0.0;
    double p_between = 0.0;

    int latent_dim = 2;  // RDP
    double latent_scale = 0.0;

    static GraphModel erdos_renyi(std::size_t node_count, double density);
    static GraphModel stochastic_block(std::size_t node_count, double density, std::size_t blocks = 2,
                                       double block_ratio = 2.0);
    static GraphModel random_dot_product(std::size_t node_count, double density);
    static GraphModel make(GraphKind kind, std::size_t node_count, double density);

    // Expected directed density implied by the parameters.
    [[nodiscard]] double expected_density() const;
};

// E[min(1, s^2 <u, v>)] for u, v uniform on [0,1]^2.
double rdp_expected_density(double latent_scale);

// Draws a graph; retries (up to 10 attempts) when no edge is drawn.
StaticNetwork generate_graph(const GraphModel& model, std::uint64_t seed);

struct SimulationRegime {
    std::string name = "custom";
    GnarexSpec spec;
    GnarexParams params;
    GraphModel graph;
    std::size_t length = 200;
    std::size_t burn_in = 50;
    double noise_sd = 0.1;
    EquationForm form = EquationForm::linear;
};

// Regimes 1-3 of the reference simulation table on 20-node graphs of density 0.4.
SimulationRegime table_regime(int id, GraphKind kind = GraphKind::erdos_renyi, std::size_t node_count = 20,
                              double density = 0.4);

/**
 * Simulates burn_in + length steps from zero initial values with i.i.d.
 * N(0, noise_sd^2) innovations and drops the burn-in. Throws
 * StationarityError when the implied VAR has spectral radius >= 1.
 */
PanelSeries simulate_panel(std::shared_ptr<const StaticNetwork> net, const SimulationRegime& regime,
                           std::uint64_t seed);

struct ReplicationOptions {
    bool predictions = true;     // GNAR-ex with and without neighbours
    bool arima = true;           // auto ARIMA and ARIMA(0,1,0) per series
    bool model_average = false;  // average of GNAR-ex(l,[ma_stage]) for l = 1..ma_max_lag
    int ma_max_lag = 9;
    int ma_stage = 1;
    double level = 0.95;
    unsigned jobs = 1;
};

struct CoefficientSummary {
    std::string name;
    double true_value = 0.0;
    double rmse = 0.0;
    double coverage = 0.0;
    std::size_t replications = 0;
};

struct PredictionRecord {
    std::string model;
    std::size_t rep = 0;
    double rmse_all = 0.0;
    double rmse_nodes = 0.0;
};

struct InclusionRecord {
    std::size_t rep = 0;
    int nodes_inside = 0;
    int node_count = 0;
};

struct ReplicationFailure {
    std::size_t rep = 0;
    std::string stage;
    std::string message;
};

struct ReplicationReport {
    std::string regime;
    std::string graph;
    GnarexSpec spec;
    std::size_t n_reps = 0;
    std::vector<CoefficientSummary> coefficients;
    std::vector<PredictionRecord> predictions;
    std::vector<InclusionRecord> inclusion;
    std::vector<ReplicationFailure> failures;

    // Median prediction RMSE of `model` over replications.
    [[nodiscard]] double median_prediction_rmse(const std::string& model, bool nodes_only = false) const;
    // Share of replications with exactly k nodes inside the MA union interval.
    [[nodiscard]] std::map<int, double> inclusion_distribution() const;
};

inline constexpr const char* kModelGnarex = "gnarex";
inline constexpr const char* kModelGnarexNoNeighbors = "gnarex_no_neighbors";
inline constexpr const char* kModelGnarexMa = "gnarex_ma";
inline constexpr const char* kModelAutoArima = "auto_arima";
inline constexpr const char* kModelArima010 = "arima_010";

/**
 * Repeats: draw graph, simulate panel, fit on all but the last column,
 * score coefficients and one-step predictions of the last column.
 * Replication r uses substreams derived from (master_seed, r); fit errors
 * are recorded per replication and excluded from the aggregates.
 */
ReplicationReport replicate_experiment(const SimulationRegime& regime, std::size_t n_reps,
                                       std::uint64_t master_seed, const ReplicationOptions& options = {});

}  // namespace gnarex
