#pragma once

#include "gnarex/network.hpp"

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

namespace gnarex {

/**
 * Order of a GNAR-ex model: maximum lag L and, per lag l, the maximum
 * neighbour stage R_l (0 = no network-effect terms at that lag).
 *
 * The coefficient vector is laid out lag by lag as
 *   alpha_l, beta_{l,1..R_l}, gamma_l, delta_{l,1..R_l}
 * so parameter_count() = 2L + 2 sum(R_l).
 */
struct GnarexSpec {
    int max_lag = 1;
    std::vector<int> stages{0};

    GnarexSpec() = default;
    GnarexSpec(int lag, std::vector<int> stages_per_lag);

    // GNAR-ex(L, [R,...,R]).
    static GnarexSpec uniform(int lag, int stage);

    [[nodiscard]] std::size_t parameter_count() const noexcept;
    [[nodiscard]] int max_stage() const noexcept;
    [[nodiscard]] int stage(int lag) const;  // lag is 1-based
    // Offset of alpha_l within theta.
    [[nodiscard]] std::size_t lag_offset(int lag) const;
    [[nodiscard]] std::vector<std::string> coefficient_names() const;
    // "GNAR-ex(2,[2,2])"
    [[nodiscard]] std::string to_string() const;

    void validate() const;

    friend bool operator==(const GnarexSpec&, const GnarexSpec&) = default;
};

struct GnarexParams {
    std::vector<double> alpha;               // [l]
    std::vector<double> gamma;               // [l]
    std::vector<std::vector<double>> beta;   // [l][r-1]
    std::vector<std::vector<double>> delta;  // [l][r-1]
    double sigma2 = 0.0;

    static GnarexParams zeros(const GnarexSpec& spec);
    static GnarexParams from_vector(const GnarexSpec& spec, const Eigen::VectorXd& theta, double sigma2);
    [[nodiscard]] Eigen::VectorXd to_vector(const GnarexSpec& spec) const;

    // Throws ArgumentError if shapes do not match the spec or sigma2 < 0.
    void check(const GnarexSpec& spec) const;
};

enum class SeriesKind { node, edge };

struct SeriesRef {
    SeriesKind kind;
    std::size_t index;
};

/**
 * Time-aligned node series G (K x T) and edge series P (M x T) on one network.
 *
 * The stacked representation orders the M edge series first and the K node
 * series after them, matching the unrestricted VAR layout.
 */
class PanelSeries {
public:
    PanelSeries(std::shared_ptr<const StaticNetwork> network, Eigen::MatrixXd node_values,
                Eigen::MatrixXd edge_values, std::vector<std::string> time_index = {});

    static PanelSeries from_stacked(std::shared_ptr<const StaticNetwork> network, const Eigen::MatrixXd& stacked,
                                    std::vector<std::string> time_index = {});

    [[nodiscard]] const StaticNetwork& network() const noexcept { return *network_; }
    [[nodiscard]] const std::shared_ptr<const StaticNetwork>& network_ptr() const noexcept { return network_; }
    [[nodiscard]] const Eigen::MatrixXd& node_values() const noexcept { return nodes_; }
    [[nodiscard]] const Eigen::MatrixXd& edge_values() const noexcept { return edges_; }
    [[nodiscard]] const std::vector<std::string>& time_index() const noexcept { return time_index_; }
    [[nodiscard]] std::size_t length() const noexcept { return static_cast<std::size_t>(nodes_.cols()); }
    [[nodiscard]] std::size_t series_count() const noexcept {
        return static_cast<std::size_t>(nodes_.rows() + edges_.rows());
    }

    [[nodiscard]] Eigen::MatrixXd stacked() const;
    // First n columns.
    [[nodiscard]] PanelSeries head(std::size_t n) const;

private:
    std::shared_ptr<const StaticNetwork> network_;
    Eigen::MatrixXd nodes_;
    Eigen::MatrixXd edges_;
    std::vector<std::string> time_index_;
};

// Row index of a series in the stacked (edges, then nodes) layout.
std::size_t stacked_index(const StaticNetwork& net, SeriesRef ref);

/**
 * Regressor vector x for `target` at column t (0-based) such that the model
 * mean is x' theta. Slots whose averaging set is empty are zero.
 * Requires L <= t <= T, so t = T builds the row of a one-step forecast.
 */
Eigen::VectorXd regressor_row(const PanelSeries& panel, const NeighborhoodTables& tables,
                              const GnarexSpec& spec, SeriesRef target, std::size_t t);

enum class EquationForm {
    linear,   // delta enters the node equation with its own coefficient
    literal,  // node equation uses gamma_l * delta_{l,r} (nonlinear in parameters)
};

/**
 * Implied VAR coefficient matrices A_1..A_L over the stacked series, so that
 * Y_t = sum_l A_l Y_{t-l} + u_t. There is no intercept.
 */
std::vector<Eigen::MatrixXd> to_var(const NeighborhoodTables& tables, const GnarexSpec& spec,
                                    const GnarexParams& params, EquationForm form = EquationForm::linear);

// Largest absolute eigenvalue of the companion matrix of A_1..A_L.
double spectral_radius(const std::vector<Eigen::MatrixXd>& var_mats);

// Y (N x S) from Y_t = sum_l A_l Y_{t-l} + noise_t with zero pre-sample values.
Eigen::MatrixXd simulate_var(const std::vector<Eigen::MatrixXd>& var_mats, const Eigen::MatrixXd& noise);

// Same trajectory computed equation by equation from the neighbour sets.
Eigen::MatrixXd simulate_recursion(const NeighborhoodTables& tables, const GnarexSpec& spec,
                                   const GnarexParams& params, const Eigen::MatrixXd& noise,
                                   EquationForm form = EquationForm::linear);

namespace detail {

// Per-series lag features of one column: self, neighbour means for stages
// 1..max_stage, cross-type mean, cross-type neighbour means for stages
// 1..max_stage. Rows are in stacked order; columns 2 + 2*max_stage.
Eigen::MatrixXd column_features(const NeighborhoodTables& tables, const Eigen::Ref<const Eigen::VectorXd>& node_col,
                                const Eigen::Ref<const Eigen::VectorXd>& edge_col, int max_stage);

inline Eigen::Index feature_self() { return 0; }
inline Eigen::Index feature_neighbor(int stage) { return stage; }
inline Eigen::Index feature_cross(int max_stage) { return max_stage + 1; }
inline Eigen::Index feature_cross_neighbor(int max_stage, int stage) { return max_stage + 1 + stage; }

}  // namespace detail

}  // namespace gnarex
