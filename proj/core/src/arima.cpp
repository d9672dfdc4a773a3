#include "gnarex/arima.hpp"

#include "gnarex/errors.hpp"
#include "gnarex/estimation.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <limits>
#include <optional>

namespace gnarex {

std::string ArimaOrder::to_string() const {
    return "ARIMA(" + std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(q) + ")";
}

namespace {

constexpr double kBoundary = 0.99;

std::vector<double> difference(std::span<const double> x, int d) {
    std::vector<double> w(x.begin(), x.end());
    for (int k = 0; k < d; ++k) {
        for (std::size_t t = w.size() - 1; t > 0; --t) {
            w[t] = w[t] - w[t - 1];
        }
        w.erase(w.begin());
    }
    return w;
}

// Largest root modulus of z^n - c_1 z^{n-1} - ... - c_n.
double root_radius(const std::vector<double>& c) {
    const auto n = static_cast<Eigen::Index>(c.size());
    if (n == 0) {
        return 0.0;
    }
    if (n == 1) {
        return std::abs(c[0]);
    }
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        comp(0, i) = c[static_cast<std::size_t>(i)];
    }
    comp.bottomLeftCorner(n - 1, n - 1).setIdentity();
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    if (es.info() != Eigen::Success) {
        return std::numeric_limits<double>::infinity();
    }
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Scales coefficients so every root lies inside radius kBoundary. The AR
// polynomial 1 - sum phi B^i has reciprocal roots of z^p - sum phi z^{p-i};
// for MA, 1 + sum theta B^j uses c_j = -theta_j.
bool clamp_polynomial(std::vector<double>& coef, bool ma) {
    std::vector<double> c = coef;
    if (ma) {
        for (double& x : c) {
            x = -x;
        }
    }
    const double rho = root_radius(c);
    if (rho < kBoundary) {
        return false;
    }
    const double scale = kBoundary / rho;
    double f = 1.0;
    for (double& x : coef) {
        f *= scale;
        x *= f;
    }
    return true;
}

struct CssProblem {
    const std::vector<double>& w;
    int p;
    int q;
    std::size_t first;  // first residual index entering the objective

    // residuals e_s for s = p..n-1 (zeros before p), and optionally the Jacobian
    // of e over [first, n) with columns (c, phi, theta).
    double evaluate(const Eigen::VectorXd& b, std::vector<double>& e, Eigen::MatrixXd* jac) const {
        const std::size_t n = w.size();
        const auto k = static_cast<Eigen::Index>(1 + p + q);
        e.assign(n, 0.0);
        Eigen::MatrixXd de;
        if (jac) {
            de = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), k);
        }
        double ss = 0.0;
        for (std::size_t s = static_cast<std::size_t>(p); s < n; ++s) {
            double v = w[s] - b[0];
            for (int i = 1; i <= p; ++i) {
                v -= b[i] * w[s - static_cast<std::size_t>(i)];
            }
            for (int j = 1; j <= q; ++j) {
                if (s >= static_cast<std::size_t>(p + j)) {
                    v -= b[p + j] * e[s - static_cast<std::size_t>(j)];
                }
            }
            e[s] = v;
            if (s >= first) {
                ss += v * v;
            }
            if (jac) {
                const auto si = static_cast<Eigen::Index>(s);
                de(si, 0) = -1.0;
                for (int i = 1; i <= p; ++i) {
                    de(si, i) = -w[s - static_cast<std::size_t>(i)];
                }
                for (int j = 1; j <= q; ++j) {
                    if (s >= static_cast<std::size_t>(p + j)) {
                        de(si, p + j) = -e[s - static_cast<std::size_t>(j)];
                    }
                }
                for (int j = 1; j <= q; ++j) {
                    if (s >= static_cast<std::size_t>(p + j)) {
                        de.row(si) -= b[p + j] * de.row(si - j);
                    }
                }
            }
        }
        if (jac) {
            const auto rows = static_cast<Eigen::Index>(n - first);
            *jac = de.bottomRows(rows);
        }
        return ss;
    }
};

Eigen::VectorXd ols_start(const std::vector<double>& w, int p, std::size_t first) {
    const std::size_t n = w.size();
    const auto rows = static_cast<Eigen::Index>(n - first);
    Eigen::MatrixXd x(rows, 1 + p);
    Eigen::VectorXd y(rows);
    for (std::size_t s = first; s < n; ++s) {
        const auto r = static_cast<Eigen::Index>(s - first);
        y[r] = w[s];
        x(r, 0) = 1.0;
        for (int i = 1; i <= p; ++i) {
            x(r, i) = w[s - static_cast<std::size_t>(i)];
        }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-12);
    Eigen::VectorXd b = qr.solve(y);
    for (Eigen::Index i = 0; i < b.size(); ++i) {
        if (!std::isfinite(b[i])) {
            b[i] = 0.0;
        }
    }
    return b;
}

void unpack(const Eigen::VectorXd& b, int p, int q, ArimaFit& fit) {
    fit.intercept = b[0];
    fit.phi.assign(b.data() + 1, b.data() + 1 + p);
    fit.theta.assign(b.data() + 1 + p, b.data() + 1 + p + q);
}

Eigen::VectorXd pack(const ArimaFit& fit) {
    const int p = static_cast<int>(fit.phi.size());
    const int q = static_cast<int>(fit.theta.size());
    Eigen::VectorXd b(1 + p + q);
    b[0] = fit.intercept;
    for (int i = 0; i < p; ++i) {
        b[1 + i] = fit.phi[static_cast<std::size_t>(i)];
    }
    for (int j = 0; j < q; ++j) {
        b[1 + p + j] = fit.theta[static_cast<std::size_t>(j)];
    }
    return b;
}

bool clamp_params(Eigen::VectorXd& b, int p, int q) {
    ArimaFit tmp;
    unpack(b, p, q, tmp);
    const bool ar = clamp_polynomial(tmp.phi, false);
    const bool ma = clamp_polynomial(tmp.theta, true);
    if (ar || ma) {
        b = pack(tmp);
    }
    return ar || ma;
}

std::size_t first_residual(const ArimaOrder& order, std::size_t condition_on) {
    const auto minimum = static_cast<std::size_t>(order.d + order.p);
    const std::size_t cond = condition_on == 0 ? minimum : condition_on;
    if (cond < minimum) {
        throw ArgumentError("condition_on must be at least d + p for " + order.to_string());
    }
    return cond - static_cast<std::size_t>(order.d);
}

}  // namespace

ArimaFit arima_fit(std::span<const double> series, ArimaOrder order, const ArimaFitOptions& options) {
    if (order.p < 0 || order.d < 0 || order.q < 0) {
        throw ArgumentError("ARIMA orders must be nonnegative");
    }
    for (double v : series) {
        if (!std::isfinite(v)) {
            throw DataError("ARIMA input contains non-finite values");
        }
    }
    const auto [p, d, q] = order;
    if (series.size() <= static_cast<std::size_t>(d) ||
        series.size() - static_cast<std::size_t>(d) <= static_cast<std::size_t>(p + q + 2)) {
        throw RangeError(order.to_string() + " needs more than " + std::to_string(p + q + 2) +
                         " observations after differencing, series has " + std::to_string(series.size()));
    }
    const std::vector<double> w = difference(series, d);
    const std::size_t first = first_residual(order, options.condition_on);
    if (first >= w.size() || w.size() - first <= static_cast<std::size_t>(p + q + 1)) {
        throw RangeError(order.to_string() + ": too few residuals after conditioning");
    }

    ArimaFit fit;
    fit.order = order;
    const CssProblem problem{w, p, q, first};
    std::vector<double> e;

    Eigen::VectorXd b = ols_start(w, p, std::max<std::size_t>(first, static_cast<std::size_t>(p)));
    b.conservativeResize(1 + p + q);
    b.tail(q).setZero();
    fit.clamped = clamp_params(b, p, q);
    double ss = problem.evaluate(b, e, nullptr);

    if (q > 0) {
        Eigen::MatrixXd jac;
        bool converged = false;
        for (int it = 0; it < options.max_iterations; ++it) {
            fit.iterations = it + 1;
            problem.evaluate(b, e, &jac);
            const Eigen::Map<const Eigen::VectorXd> resid(e.data() + first,
                                                          static_cast<Eigen::Index>(w.size() - first));
            const Eigen::MatrixXd jtj = jac.transpose() * jac;
            const Eigen::VectorXd grad = jac.transpose() * resid;
            const double damping = 1e-12 * std::max(1.0, jtj.diagonal().maxCoeff());
            const Eigen::VectorXd step =
                -(jtj + damping * Eigen::MatrixXd::Identity(jtj.rows(), jtj.cols())).ldlt().solve(grad);
            if (!step.allFinite()) {
                break;
            }
            double scale = 1.0;
            bool improved = false;
            Eigen::VectorXd trial;
            double trial_ss = ss;
            for (int halving = 0; halving < 40; ++halving, scale *= 0.5) {
                trial = b + scale * step;
                clamp_params(trial, p, q);
                trial_ss = problem.evaluate(trial, e, nullptr);
                if (std::isfinite(trial_ss) && trial_ss <= ss) {
                    improved = true;
                    break;
                }
            }
            if (!improved) {
                converged = true;  // no descent direction left
                break;
            }
            const double change = ss - trial_ss;
            const double move = (trial - b).norm();
            b = trial;
            ss = trial_ss;
            if (change <= 1e-10 * (ss + 1e-300) || move <= 1e-9 * (1.0 + b.norm())) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw NumericError(order.to_string() + " CSS did not converge after " +
                               std::to_string(options.max_iterations) + " iterations");
        }
    }

    fit.clamped = clamp_params(b, p, q) || fit.clamped;
    // post-clamp check: report whether the final polynomials sit on the boundary
    {
        ArimaFit tmp;
        unpack(b, p, q, tmp);
        std::vector<double> ma = tmp.theta;
        for (double& x : ma) {
            x = -x;
        }
        if (root_radius(tmp.phi) >= kBoundary - 1e-12 || root_radius(ma) >= kBoundary - 1e-12) {
            fit.clamped = true;
        }
    }
    ss = problem.evaluate(b, e, nullptr);
    unpack(b, p, q, fit);

    fit.n_used = w.size() - first;
    const double n_used = static_cast<double>(fit.n_used);
    fit.sigma2 = ss / n_used;
    const double s2 = std::max(fit.sigma2, std::numeric_limits<double>::min());
    fit.log_likelihood = -0.5 * n_used * (std::log(2.0 * M_PI * s2) + 1.0);
    fit.aic = -2.0 * fit.log_likelihood + 2.0 * (p + q + 2);
    fit.residual_tail.assign(e.end() - q, e.end());
    return fit;
}

double kpss_level_statistic(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 2) {
        throw RangeError("KPSS statistic needs at least 2 observations");
    }
    double mean = 0.0;
    for (double v : x) {
        mean += v;
    }
    mean /= static_cast<double>(n);
    std::vector<double> e(n);
    double partial = 0.0;
    double eta = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        e[t] = x[t] - mean;
        partial += e[t];
        eta += partial * partial;
    }
    const double nn = static_cast<double>(n);
    eta /= nn * nn;

    // Bartlett-weighted long-run variance with the short lag truncation.
    const auto lags = static_cast<std::size_t>(3.0 * std::sqrt(nn) / 13.0);
    double s2 = 0.0;
    for (double v : e) {
        s2 += v * v;
    }
    for (std::size_t l = 1; l <= lags && l < n; ++l) {
        double acc = 0.0;
        for (std::size_t t = l; t < n; ++t) {
            acc += e[t] * e[t - l];
        }
        s2 += 2.0 * (1.0 - static_cast<double>(l) / static_cast<double>(lags + 1)) * acc;
    }
    s2 /= nn;
    if (!(s2 > 0.0)) {
        return 0.0;  // constant series: nothing to difference away
    }
    return eta / s2;
}

int select_differencing(std::span<const double> series, int max_d, double critical_value) {
    std::vector<double> x(series.begin(), series.end());
    int d = 0;
    while (d < max_d && x.size() > 2 && kpss_level_statistic(x) > critical_value) {
        x = difference(x, 1);
        ++d;
    }
    return d;
}

namespace {

std::vector<std::complex<double>> inverse_roots(const std::vector<double>& c) {
    const auto n = static_cast<Eigen::Index>(c.size());
    std::vector<std::complex<double>> out;
    if (n == 0) {
        return out;
    }
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        comp(0, i) = c[static_cast<std::size_t>(i)];
    }
    if (n > 1) {
        comp.bottomLeftCorner(n - 1, n - 1).setIdentity();
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.push_back(es.eigenvalues()[i]);
    }
    return out;
}

// Rejects fits whose polynomials sit next to the unit circle (roots inside
// 1.01, as the R forecast package does) or share a near-common factor, in
// which case the AR and MA terms cancel and the order is not identified.
bool admissible(const ArimaFit& fit, double cancel_tolerance) {
    if (fit.clamped) {
        return false;
    }
    std::vector<double> ma = fit.theta;
    for (double& v : ma) {
        v = -v;
    }
    const auto ar_roots = inverse_roots(fit.phi);
    const auto ma_roots = inverse_roots(ma);
    constexpr double kMaxInverseRoot = 1.0 / 1.01;
    for (const auto& r : ar_roots) {
        if (std::abs(r) >= kMaxInverseRoot) {
            return false;
        }
    }
    for (const auto& r : ma_roots) {
        if (std::abs(r) >= kMaxInverseRoot) {
            return false;
        }
    }
    for (const auto& a : ar_roots) {
        for (const auto& m : ma_roots) {
            if (std::abs(a - m) < cancel_tolerance) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

ArimaFit auto_arima(std::span<const double> series, const AutoArimaOptions& options) {
    if (series.size() < 10) {
        throw RangeError("auto_arima needs at least 10 observations");
    }
    for (double v : series) {
        if (!std::isfinite(v)) {
            throw DataError("ARIMA input contains non-finite values");
        }
    }
    const int d = select_differencing(series, options.max_d, options.kpss_critical_value);
    ArimaFitOptions fit_options;
    fit_options.condition_on = static_cast<std::size_t>(d + options.max_p);
    std::optional<ArimaFit> best;
    std::optional<ArimaFit> fallback;  // best fit ignoring admissibility
    std::string last_error;
    for (int p = 0; p <= options.max_p; ++p) {
        for (int q = 0; q <= options.max_q; ++q) {
            if (p + q > options.max_pq) {
                continue;
            }
            try {
                ArimaFit candidate = arima_fit(series, {p, d, q}, fit_options);
                if (!fallback || candidate.aic < fallback->aic) {
                    fallback = candidate;
                }
                if (admissible(candidate, options.cancel_tolerance) && (!best || candidate.aic < best->aic)) {
                    best = std::move(candidate);
                }
            } catch (const Error& err) {
                last_error = err.what();
            }
        }
    }
    if (best) {
        return *best;
    }
    if (fallback) {
        return *fallback;
    }
    throw NumericError("auto_arima: every candidate failed; last error: " + last_error);
}

std::vector<double> arima_psi_weights(const ArimaFit& fit, int count) {
    // a(B) = (1 - sum phi_i B^i)(1 - B)^d written as 1 - sum a_i B^i
    std::vector<double> poly{1.0};
    for (double phi : fit.phi) {
        poly.push_back(-phi);
    }
    for (int k = 0; k < fit.order.d; ++k) {
        std::vector<double> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= poly[i];
        }
        poly = std::move(next);
    }
    std::vector<double> psi(static_cast<std::size_t>(std::max(count, 0)), 0.0);
    for (std::size_t j = 0; j < psi.size(); ++j) {
        double v = j == 0 ? 1.0 : (j <= fit.theta.size() ? fit.theta[j - 1] : 0.0);
        for (std::size_t i = 1; i < poly.size() && i <= j; ++i) {
            v -= poly[i] * psi[j - i];
        }
        psi[j] = v;
    }
    return psi;
}

ArimaForecast arima_forecast(const ArimaFit& fit, std::span<const double> last_values, int horizon, double level) {
    if (horizon < 1) {
        throw ArgumentError("forecast horizon must be >= 1");
    }
    const auto [p, d, q] = fit.order;
    const auto needed = static_cast<std::size_t>(std::max(d + p, d > 0 ? d + 1 : 0));
    if (last_values.size() < needed) {
        throw ArgumentError(fit.order.to_string() + " forecast needs at least " + std::to_string(needed) +
                            " past values");
    }

    // Differencing levels: level k holds the k-times differenced history.
    std::vector<std::vector<double>> levels{std::vector<double>(last_values.begin(), last_values.end())};
    for (int k = 0; k < d; ++k) {
        levels.push_back(difference(levels.back(), 1));
    }
    std::vector<double> w = levels.back();
    std::vector<double> e(fit.residual_tail);
    std::vector<double> point;
    for (int h = 0; h < horizon; ++h) {
        double v = fit.intercept;
        for (int i = 1; i <= p; ++i) {
            v += fit.phi[static_cast<std::size_t>(i - 1)] * w[w.size() - static_cast<std::size_t>(i)];
        }
        for (int j = 1; j <= q; ++j) {
            const auto idx = static_cast<std::ptrdiff_t>(e.size()) - j;
            if (idx >= 0) {
                v += fit.theta[static_cast<std::size_t>(j - 1)] * e[static_cast<std::size_t>(idx)];
            }
        }
        w.push_back(v);
        e.push_back(0.0);
        // integrate back: level k gets last(level k) + new value of level k+1
        double x = v;
        for (int k = d - 1; k >= 0; --k) {
            auto& lv = levels[static_cast<std::size_t>(k)];
            x = lv.back() + x;
            lv.push_back(x);
        }
        point.push_back(x);
    }

    const auto psi = arima_psi_weights(fit, horizon);
    const double z = normal_quantile(0.5 * (1.0 + level));
    ArimaForecast out;
    out.point = point;
    double cumulative = 0.0;
    for (int h = 0; h < horizon; ++h) {
        cumulative += psi[static_cast<std::size_t>(h)] * psi[static_cast<std::size_t>(h)];
        const double half = z * std::sqrt(fit.sigma2 * cumulative);
        out.lower.push_back(point[static_cast<std::size_t>(h)] - half);
        out.upper.push_back(point[static_cast<std::size_t>(h)] + half);
    }
    return out;
}

std::vector<double> css_gradient(std::span<const double> series, const ArimaFit& fit, std::size_t condition_on) {
    const std::vector<double> w = difference(series, fit.order.d);
    const std::size_t first = first_residual(fit.order, condition_on);
    const CssProblem problem{w, fit.order.p, fit.order.q, first};
    std::vector<double> e;
    Eigen::MatrixXd jac;
    problem.evaluate(pack(fit), e, &jac);
    const Eigen::Map<const Eigen::VectorXd> resid(e.data() + first, static_cast<Eigen::Index>(w.size() - first));
    const Eigen::VectorXd g = 2.0 * jac.transpose() * resid;
    return {g.data(), g.data() + g.size()};
}

}  // namespace gnarex
