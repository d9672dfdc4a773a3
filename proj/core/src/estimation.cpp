#include "gnarex/estimation.hpp"

#include "gnarex/errors.hpp"

#include <Eigen/QR>

#include <cmath>

namespace gnarex {

Eigen::VectorXd GnarexFit::standard_errors() const {
    return param_cov.diagonal().cwiseMax(0.0).cwiseSqrt();
}

Design build_design(const PanelSeries& panel, const NeighborhoodTables& tables, const GnarexSpec& spec) {
    spec.validate();
    const auto lags = static_cast<std::size_t>(spec.max_lag);
    const std::size_t periods = panel.length();
    if (periods <= lags) {
        throw RangeError("series length " + std::to_string(periods) + " must exceed max lag " +
                         std::to_string(lags));
    }
    const auto n = static_cast<Eigen::Index>(panel.series_count());
    const auto m = static_cast<Eigen::Index>(panel.network().edge_count());
    const int rmax = spec.max_stage();
    const auto p = static_cast<Eigen::Index>(spec.parameter_count());
    const auto rows = n * static_cast<Eigen::Index>(periods - lags);

    // Column features are shared by every lag that reads the same column.
    std::vector<Eigen::MatrixXd> features(periods - 1);
    for (std::size_t s = 0; s + 1 < periods; ++s) {
        const auto col = static_cast<Eigen::Index>(s);
        features[s] = detail::column_features(tables, panel.node_values().col(col), panel.edge_values().col(col), rmax);
    }

    Design d{Eigen::MatrixXd(rows, p), Eigen::VectorXd(rows)};
    Eigen::Index row = 0;
    for (std::size_t t = lags; t < periods; ++t) {
        const auto col = static_cast<Eigen::Index>(t);
        for (Eigen::Index s = 0; s < n; ++s, ++row) {
            d.y[row] = s < m ? panel.edge_values()(s, col) : panel.node_values()(s - m, col);
            Eigen::Index k = 0;
            for (int l = 1; l <= spec.max_lag; ++l) {
                const auto& f = features[t - static_cast<std::size_t>(l)];
                d.x(row, k++) = f(s, detail::feature_self());
                for (int r = 1; r <= spec.stage(l); ++r) {
                    d.x(row, k++) = f(s, detail::feature_neighbor(r));
                }
                d.x(row, k++) = f(s, detail::feature_cross(rmax));
                for (int r = 1; r <= spec.stage(l); ++r) {
                    d.x(row, k++) = f(s, detail::feature_cross_neighbor(rmax, r));
                }
            }
        }
    }
    return d;
}

GnarexFit fit(const PanelSeries& panel, const NeighborhoodTables& tables, const GnarexSpec& spec) {
    spec.validate();
    const Design design = build_design(panel, tables, spec);
    const Eigen::Index rows = design.x.rows();
    const Eigen::Index p = design.x.cols();
    if (rows <= p) {
        throw RangeError("stacked regression has " + std::to_string(rows) + " rows for " + std::to_string(p) +
                         " coefficients; need positive residual degrees of freedom");
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.x);
    qr.setThreshold(kRankTolerance);
    if (qr.rank() < p) {
        const auto names = spec.coefficient_names();
        std::vector<std::string> offending;
        std::string listed;
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index k = qr.rank(); k < p; ++k) {
            offending.push_back(names[static_cast<std::size_t>(perm[k])]);
            listed += (listed.empty() ? "" : ", ") + offending.back();
        }
        throw SingularityError("design matrix of " + spec.to_string() + " is rank deficient (rank " +
                                   std::to_string(qr.rank()) + " of " + std::to_string(p) +
                                   "); dependent columns: " + listed,
                               std::move(offending));
    }

    const Eigen::VectorXd theta = qr.solve(design.y);
    const Eigen::VectorXd resid = design.y - design.x * theta;
    const auto dof = static_cast<std::size_t>(rows - p);
    const double sigma2 = resid.squaredNorm() / static_cast<double>(dof);

    // (X'X)^-1 = P R^-1 R^-T P'
    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
    const Eigen::MatrixXd perm_cov = r_inv * r_inv.transpose();
    Eigen::MatrixXd xtx_inv(p, p);
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index a = 0; a < p; ++a) {
        for (Eigen::Index b = 0; b < p; ++b) {
            xtx_inv(perm[a], perm[b]) = perm_cov(a, b);
        }
    }

    GnarexFit out;
    out.spec = spec;
    out.params = GnarexParams::from_vector(spec, theta, sigma2);
    out.param_cov = sigma2 * 0.5 * (xtx_inv + xtx_inv.transpose());
    out.residual_variance = sigma2;
    out.dof = dof;
    out.observations = static_cast<std::size_t>(rows);
    out.training_window = panel.stacked().rightCols(spec.max_lag);
    out.network = panel.network_ptr();
    out.tables = std::make_shared<const NeighborhoodTables>(tables);
    return out;
}

GnarexFit fit(const PanelSeries& panel, const GnarexSpec& spec) {
    spec.validate();
    const NeighborhoodTables tables(panel.network(), spec.max_stage());
    return fit(panel, tables, spec);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw ArgumentError("normal quantile needs p in (0,1)");
    }
    // Acklam's rational approximation followed by one Halley step on erfc.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

std::vector<CoefficientRow> coefficient_table(const GnarexFit& fit, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw ArgumentError("confidence level must lie in (0,1)");
    }
    const double z = normal_quantile(0.5 * (1.0 + level));
    const auto names = fit.spec.coefficient_names();
    const Eigen::VectorXd theta = fit.coefficients();
    const Eigen::VectorXd se = fit.standard_errors();
    std::vector<CoefficientRow> rows;
    rows.reserve(names.size());
    for (std::size_t k = 0; k < names.size(); ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        rows.push_back({names[k], theta[i], se[i], theta[i] - z * se[i], theta[i] + z * se[i]});
    }
    return rows;
}

}  // namespace gnarex
