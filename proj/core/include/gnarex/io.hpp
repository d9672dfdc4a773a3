#pragma once

#include "gnarex/arima.hpp"
#include "gnarex/estimation.hpp"
#include "gnarex/forecasting.hpp"
#include "gnarex/network.hpp"
#include "gnarex/nowcast.hpp"
#include "gnarex/simulation.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gnarex::io {

// Comma-separated table with a header row. Quoted fields ("a,b", "") are
// supported; blank lines and lines starting with '#' are skipped.
struct CsvTable {
    std::string source;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> lines;  // 1-based source line of each row

    // Index of a header column; DataError if absent.
    [[nodiscard]] std::size_t column(std::string_view name) const;
    [[nodiscard]] bool has_column(std::string_view name) const;
    [[nodiscard]] std::string where(std::size_t row) const;  // "file:line"
};

CsvTable parse_csv(std::string_view text, const std::string& source);
CsvTable read_csv(const std::filesystem::path& path);

// Strict decimal parse of the whole field; DataError naming `where`.
double parse_double(std::string_view field, const std::string& where);
long long parse_integer(std::string_view field, const std::string& where);

/**
 * Network from a node file (`node[,label]`) and an edge list (`source,target`).
 * Nodes are identified by the `node` column everywhere else (edges, panels,
 * configs); edge q is the q-th row of the edge list.
 */
std::shared_ptr<const StaticNetwork> load_network(const std::filesystem::path& nodes_csv,
                                                  const std::filesystem::path& edges_csv);

struct LongPanel {
    std::vector<std::string> dates;  // sorted, unique
    Eigen::MatrixXd node_values;     // K x T
    Eigen::MatrixXd edge_values;     // M x T
};

/**
 * Long-format node (`date,node,value`) and edge (`date,source,target,value`)
 * files on a common date grid. With `missing_edge_value` unset, every
 * (edge, date) cell must be present; otherwise absent cells take that value.
 * Node cells are always required.
 */
LongPanel load_long_panel(const StaticNetwork& net, const std::filesystem::path& node_csv,
                          const std::filesystem::path& edge_csv,
                          std::optional<double> missing_edge_value = std::nullopt);

PanelSeries load_panel(std::shared_ptr<const StaticNetwork> net, const std::filesystem::path& node_csv,
                       const std::filesystem::path& edge_csv);

// Checks YYYY-MM formatting and that consecutive dates are one month apart.
void check_monthly(const std::vector<std::string>& dates, const std::string& where);

/**
 * A release directory holds nodes.csv, edges.csv, node_levels.csv and
 * edge_levels.csv. Months without a payment row on an existing edge are
 * level 0. The release id is the directory name.
 */
ReleaseDataset load_release(const std::filesystem::path& dir);

// `node,value` file of next-month levels.
std::map<std::string, double> load_actuals(const std::filesystem::path& path);

// Flat `key = value` (or `key: value`) text; '#' starts a comment.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(std::string_view text, const std::string& source);
KeyValues read_key_values(const std::filesystem::path& path);

// drop_nodes (comma-separated), corr_threshold, corr_scope (all_nodes|endpoints).
SparsificationConfig sparsification_config(const KeyValues& kv, const std::string& source);
SparsificationConfig load_sparsification_config(const std::filesystem::path& path);

/**
 * Regime file, e.g.
 *   lags = 2
 *   stages = 2,2
 *   alpha = -0.1, 0.3
 *   beta = 0.1,-0.2; -0.02,0.03     (one group per lag, ';'-separated)
 *   gamma = 0.01, 0.01
 *   delta = 0.02,-0.01; -0.02,0.01
 * plus optional graph (er|sbm|rdp), nodes, density, T, burn_in, sigma, name.
 */
SimulationRegime simulation_regime(const KeyValues& kv, const std::string& source);
SimulationRegime load_regime(const std::filesystem::path& path);

// Comma-separated list of integers / doubles.
std::vector<int> parse_int_list(std::string_view text, const std::string& where);
std::vector<double> parse_double_list(std::string_view text, const std::string& where);

// Shortest-roundtrip-safe "%.17g"; "NA" for NaN.
std::string format_number(double x);
std::string format_optional(const std::optional<double>& x);

// Quotes a CSV field if it contains a comma, quote or newline.
std::string csv_field(std::string_view text);

// Writes to a sibling temporary file, then renames over `path`. Missing
// parent directories are created.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string coefficients_csv(const GnarexFit& fit, double level = 0.95);
std::string forecast_csv(const StaticNetwork& net, const ForecastResult& fc);

std::string replication_coefficients_csv(const ReplicationReport& report);
std::string replication_predictions_csv(const ReplicationReport& report);
// One row per report (graph model), columns K-3..K of nodes inside.
std::string inclusion_distribution_csv(const std::vector<ReplicationReport>& reports);

struct BaselineRow {
    std::string series;
    std::string model;
    ArimaOrder order;
    double aic = 0.0;
    double forecast = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};
std::string baseline_csv(const std::vector<BaselineRow>& rows);

// Relative error of total GDP per spec: release,lag,stage,model,total_forecast,total_actual,relative_error,inclusion.
std::string nowcast_specs_csv(const std::vector<NowcastReport>& reports);
// Per-industry forecasts of every model in every report.
std::string nowcast_industries_csv(const std::vector<NowcastReport>& reports);
// Best GNAR-ex versus the ARIMA baselines.
std::string best_model_csv(const std::vector<NowcastReport>& reports);
// Model average versus the ARIMA baselines.
std::string model_average_csv(const std::vector<NowcastReport>& reports);
// Share of industries inside the model-average union interval.
std::string model_average_inclusion_csv(const std::vector<NowcastReport>& reports);
// Inclusion share per lag (rows) and uniform stage (columns) for one release.
std::string inclusion_grid_csv(const NowcastReport& report);
std::string flags_text(const std::vector<NowcastReport>& reports);

// Rebuilds scored reports from a nowcast_industries.csv file.
std::vector<NowcastReport> load_industry_reports(const std::filesystem::path& path);

std::string industry_summary_csv(const IndustrySummary& summary);
std::string top_industries_csv(const IndustrySummary& summary);

}  // namespace gnarex::io
