#pragma once

#include "gnarex/estimation.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace gnarex {

/// Point forecasts with symmetric Gaussian intervals for horizons 1..h.
struct ForecastResult {
    int horizon = 1;
    double level = 0.95;
    Eigen::MatrixXd node_point;  // K x h
    Eigen::MatrixXd edge_point;  // M x h
    Eigen::MatrixXd node_lower;
    Eigen::MatrixXd node_upper;
    Eigen::MatrixXd edge_lower;
    Eigen::MatrixXd edge_upper;
};

/**
 * Iterates the fitted recursion from the training window. The interval
 * half-width at step s is z * sqrt(sigma2 * sum_{j<s} (Psi_j Psi_j')_nn),
 * with Psi the moving-average weights of the implied VAR. Parameter
 * estimation uncertainty is not included.
 */
ForecastResult forecast(const GnarexFit& fit, int horizon = 1, double level = 0.95);

/**
 * Weighted mean of point forecasts with the union of the intervals
 * (minimum lower, maximum upper). Weights default to uniform.
 */
ForecastResult model_average(const std::vector<ForecastResult>& forecasts,
                             const std::optional<std::vector<double>>& weights = std::nullopt);

// P(X >= k) for X ~ Binomial(n, p), by direct summation.
double binomial_inclusion_reference(int n, int k, double p);

}  // namespace gnarex
