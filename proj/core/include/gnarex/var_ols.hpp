#pragma once

#include "gnarex/model.hpp"

#include <Eigen/Dense>

#include <vector>

namespace gnarex {

// Unrestricted VAR(L) with intercept, fitted equation by equation.
struct VarOlsFit {
    Eigen::VectorXd intercept;
    std::vector<Eigen::MatrixXd> coefficients;  // A_1..A_L
    Eigen::MatrixXd residual_cov;
};

// `series` is N x T. Requires T - L > L*N + 1.
VarOlsFit var_ols_fit(const Eigen::MatrixXd& series, int lags);

// Stacked (edges then nodes) panel.
VarOlsFit var_ols_fit(const PanelSeries& panel, int lags);

// One-step forecast from the last L columns of `history`.
Eigen::VectorXd var_ols_forecast(const VarOlsFit& fit, const Eigen::MatrixXd& history);

}  // namespace gnarex
