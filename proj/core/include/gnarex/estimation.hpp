#pragma once

#include "gnarex/model.hpp"

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

namespace gnarex {

/// Least-squares GNAR-ex fit plus what is needed to forecast from it.
struct GnarexFit {
    GnarexSpec spec;
    GnarexParams params;
    Eigen::MatrixXd param_cov;
    double residual_variance = 0.0;
    std::size_t dof = 0;
    std::size_t observations = 0;  // rows of the stacked regression
    // Last L columns of the stacked series (edges first, then nodes).
    Eigen::MatrixXd training_window;
    std::shared_ptr<const StaticNetwork> network;
    std::shared_ptr<const NeighborhoodTables> tables;

    [[nodiscard]] Eigen::VectorXd coefficients() const { return params.to_vector(spec); }
    [[nodiscard]] Eigen::VectorXd standard_errors() const;
};

struct CoefficientRow {
    std::string name;
    double estimate;
    double std_error;
    double ci_lower;
    double ci_upper;
};

/**
 * Stacked design matrix and response over every series and t = L..T-1.
 * Row order: for each t, the M edge equations then the K node equations.
 */
struct Design {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
};

Design build_design(const PanelSeries& panel, const NeighborhoodTables& tables, const GnarexSpec& spec);

// Rank tolerance relative to the largest pivot of the column-pivoted QR.
inline constexpr double kRankTolerance = 1e-10;

/**
 * OLS fit of the shared coefficient vector by column-pivoted Householder QR.
 * sigma2 = RSS / (n - p) and param_cov = sigma2 (X'X)^-1.
 *
 * Throws RangeError when n <= p and SingularityError (naming the dependent
 * coefficients) when the design is rank deficient.
 */
GnarexFit fit(const PanelSeries& panel, const NeighborhoodTables& tables, const GnarexSpec& spec);

// Convenience overload that builds the neighbourhood tables itself.
GnarexFit fit(const PanelSeries& panel, const GnarexSpec& spec);

// Estimate, standard error and symmetric normal interval at `level`.
std::vector<CoefficientRow> coefficient_table(const GnarexFit& fit, double level = 0.95);

// Standard-normal quantile.
double normal_quantile(double p);

}  // namespace gnarex
