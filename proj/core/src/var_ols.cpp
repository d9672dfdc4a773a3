#include "gnarex/var_ols.hpp"

#include "gnarex/errors.hpp"

#include <Eigen/QR>

namespace gnarex {

VarOlsFit var_ols_fit(const Eigen::MatrixXd& series, int lags) {
    if (lags < 1) {
        throw ArgumentError("VAR lag must be >= 1");
    }
    const Eigen::Index n = series.rows();
    const Eigen::Index periods = series.cols();
    const Eigen::Index rows = periods - lags;
    const Eigen::Index regressors = 1 + lags * n;
    if (rows <= lags * n + 1) {
        throw RangeError("unrestricted VAR(" + std::to_string(lags) + ") on " + std::to_string(n) +
                         " series needs T - L > L*N + 1 (T=" + std::to_string(periods) + ")");
    }
    Eigen::MatrixXd x(rows, regressors);
    Eigen::MatrixXd y(rows, n);
    for (Eigen::Index t = lags; t < periods; ++t) {
        const Eigen::Index r = t - lags;
        x(r, 0) = 1.0;
        for (Eigen::Index l = 1; l <= lags; ++l) {
            x.block(r, 1 + (l - 1) * n, 1, n) = series.col(t - l).transpose();
        }
        y.row(r) = series.col(t).transpose();
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    const Eigen::MatrixXd b = qr.solve(y);  // regressors x n

    VarOlsFit fit;
    fit.intercept = b.row(0).transpose();
    for (Eigen::Index l = 1; l <= lags; ++l) {
        fit.coefficients.push_back(b.block(1 + (l - 1) * n, 0, n, n).transpose());
    }
    const Eigen::MatrixXd resid = y - x * b;
    fit.residual_cov = resid.transpose() * resid / static_cast<double>(rows - regressors);
    return fit;
}

VarOlsFit var_ols_fit(const PanelSeries& panel, int lags) {
    return var_ols_fit(panel.stacked(), lags);
}

Eigen::VectorXd var_ols_forecast(const VarOlsFit& fit, const Eigen::MatrixXd& history) {
    const auto lags = static_cast<Eigen::Index>(fit.coefficients.size());
    if (history.cols() < lags || history.rows() != fit.intercept.size()) {
        throw ArgumentError("VAR forecast history has the wrong shape");
    }
    Eigen::VectorXd y = fit.intercept;
    for (Eigen::Index l = 1; l <= lags; ++l) {
        y.noalias() += fit.coefficients[static_cast<std::size_t>(l - 1)] * history.col(history.cols() - l);
    }
    return y;
}

}  // namespace gnarex
