#include "gnarex/forecasting.hpp"

#include "gnarex/errors.hpp"

#include <algorithm>
#include <cmath>

namespace gnarex {

ForecastResult forecast(const GnarexFit& fit, int horizon, double level) {
    if (horizon < 1) {
        throw ArgumentError("forecast horizon must be >= 1");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw ArgumentError("forecast level must lie in (0,1)");
    }
    if (!fit.tables || !fit.network) {
        throw ArgumentError("fit carries no network");
    }
    const auto var = to_var(*fit.tables, fit.spec, fit.params);
    const auto lags = static_cast<Eigen::Index>(var.size());
    const auto m = static_cast<Eigen::Index>(fit.network->edge_count());
    const auto k = static_cast<Eigen::Index>(fit.network->node_count());
    const Eigen::Index n = m + k;
    if (fit.training_window.rows() != n || fit.training_window.cols() != lags) {
        throw ArgumentError("training window does not match the fitted model");
    }

    // history columns: training window followed by forecasts
    Eigen::MatrixXd path(n, lags + horizon);
    path.leftCols(lags) = fit.training_window;
    for (Eigen::Index h = 0; h < horizon; ++h) {
        Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
        for (Eigen::Index l = 1; l <= lags; ++l) {
            y.noalias() += var[static_cast<std::size_t>(l - 1)] * path.col(lags + h - l);
        }
        path.col(lags + h) = y;
    }

    // Psi_0 = I, Psi_s = sum_{j=1}^{min(s,L)} A_j Psi_{s-j}
    std::vector<Eigen::MatrixXd> psi;
    psi.reserve(static_cast<std::size_t>(horizon));
    psi.push_back(Eigen::MatrixXd::Identity(n, n));
    Eigen::MatrixXd variance(n, horizon);
    Eigen::VectorXd cumulative = Eigen::VectorXd::Zero(n);
    for (Eigen::Index s = 0; s < horizon; ++s) {
        if (s > 0) {
            Eigen::MatrixXd next = Eigen::MatrixXd::Zero(n, n);
            for (Eigen::Index j = 1; j <= std::min(s, lags); ++j) {
                next.noalias() += var[static_cast<std::size_t>(j - 1)] * psi[static_cast<std::size_t>(s - j)];
            }
            psi.push_back(std::move(next));
        }
        cumulative += psi.back().rowwise().squaredNorm();
        variance.col(s) = fit.residual_variance * cumulative;
    }

    const double z = normal_quantile(0.5 * (1.0 + level));
    const Eigen::MatrixXd point = path.rightCols(horizon);
    const Eigen::MatrixXd half = z * variance.cwiseSqrt();

    ForecastResult out;
    out.horizon = horizon;
    out.level = level;
    out.edge_point = point.topRows(m);
    out.node_point = point.bottomRows(k);
    out.edge_lower = out.edge_point - half.topRows(m);
    out.edge_upper = out.edge_point + half.topRows(m);
    out.node_lower = out.node_point - half.bottomRows(k);
    out.node_upper = out.node_point + half.bottomRows(k);
    return out;
}

ForecastResult model_average(const std::vector<ForecastResult>& forecasts,
                             const std::optional<std::vector<double>>& weights) {
    if (forecasts.empty()) {
        throw ArgumentError("model averaging needs at least one forecast");
    }
    const auto count = forecasts.size();
    std::vector<double> w = weights.value_or(std::vector<double>(count, 1.0 / static_cast<double>(count)));
    if (w.size() != count) {
        throw ArgumentError("model averaging weights must match the number of forecasts");
    }
    double total = 0.0;
    for (double x : w) {
        if (!(x >= 0.0)) {
            throw ArgumentError("model averaging weights must be nonnegative");
        }
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw ArgumentError("model averaging weights must sum to 1");
    }

    const auto& first = forecasts.front();
    for (const auto& f : forecasts) {
        if (f.horizon != first.horizon || f.level != first.level || f.node_point.rows() != first.node_point.rows() ||
            f.edge_point.rows() != first.edge_point.rows() || f.node_point.cols() != first.node_point.cols()) {
            throw ArgumentError("forecasts to average must share network, horizon and level");
        }
    }

    // Running weighted mean: identical inputs reproduce themselves exactly.
    ForecastResult out = first;
    double seen = w.front();
    for (std::size_t i = 1; i < count; ++i) {
        const auto& f = forecasts[i];
        seen += w[i];
        if (seen > 0.0 && w[i] > 0.0) {
            const double step = w[i] / seen;
            out.node_point += step * (f.node_point - out.node_point);
            out.edge_point += step * (f.edge_point - out.edge_point);
        }
        out.node_lower = out.node_lower.cwiseMin(f.node_lower);
        out.node_upper = out.node_upper.cwiseMax(f.node_upper);
        out.edge_lower = out.edge_lower.cwiseMin(f.edge_lower);
        out.edge_upper = out.edge_upper.cwiseMax(f.edge_upper);
    }
    return out;
}

double binomial_inclusion_reference(int n, int k, double p) {
    if (n < 0 || k < 0 || k > n) {
        throw ArgumentError("binomial reference needs 0 <= k <= n");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw ArgumentError("binomial reference needs 0 < p < 1");
    }
    double tail = 0.0;
    for (int j = k; j <= n; ++j) {
        const double log_choose = std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);
        tail += std::exp(log_choose + j * std::log(p) + (n - j) * std::log1p(-p));
    }
    return std::min(tail, 1.0);
}

}  // namespace gnarex
