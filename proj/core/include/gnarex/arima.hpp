#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gnarex {

struct ArimaOrder {
    int p = 0;
    int d = 0;
    int q = 0;

    [[nodiscard]] std::string to_string() const;
    friend bool operator==(const ArimaOrder&, const ArimaOrder&) = default;
};

/**
 * Conditional-sum-of-squares ARIMA fit. On the d-times differenced series w:
 *   w_t = c + sum_i phi_i w_{t-i} + sum_j theta_j e_{t-j} + e_t
 * with pre-sample residuals set to zero.
 */
struct ArimaFit {
    ArimaOrder order;
    double intercept = 0.0;
    std::vector<double> phi;
    std::vector<double> theta;
    double sigma2 = 0.0;
    double log_likelihood = 0.0;
    double aic = 0.0;
    std::size_t n_used = 0;      // residuals entering the likelihood
    int iterations = 0;
    bool clamped = false;        // AR/MA polynomial pulled back inside the unit circle
    std::vector<double> residual_tail;  // last q residuals, oldest first
};

struct ArimaFitOptions {
    // Leading observations of the undifferenced series excluded from the
    // likelihood; 0 means d + p. Equal values make AICs comparable across orders.
    std::size_t condition_on = 0;
    int max_iterations = 200;
};

ArimaFit arima_fit(std::span<const double> series, ArimaOrder order, const ArimaFitOptions& options = {});

struct AutoArimaOptions {
    int max_p = 3;
    int max_d = 2;
    int max_q = 3;
    int max_pq = 5;
    double kpss_critical_value = 0.463;  // 5% level
    double cancel_tolerance = 0.1;       // AR/MA inverse roots closer than this cancel
};

/**
 * KPSS level-stationarity statistic with a Bartlett long-run variance and
 * lag truncation floor(3 sqrt(n) / 13). Returns 0 for a constant series.
 */
double kpss_level_statistic(std::span<const double> x);

// Differences while the KPSS statistic exceeds the critical value.
int select_differencing(std::span<const double> series, int max_d, double critical_value = 0.463);

/**
 * d from repeated KPSS tests, then the minimum-AIC (p, q) at that d among
 * fits whose roots stay outside 1.01 and whose AR and MA factors do not
 * cancel. All candidates share the same conditioning so their AICs compare.
 */
ArimaFit auto_arima(std::span<const double> series, const AutoArimaOptions& options = {});

struct ArimaForecast {
    std::vector<double> point;
    std::vector<double> lower;
    std::vector<double> upper;
};

/**
 * h-step forecasts on the original scale. `last_values` is the tail of the
 * fitted series (at least d + p values); MA terms use the residuals stored
 * in the fit.
 */
ArimaForecast arima_forecast(const ArimaFit& fit, std::span<const double> last_values, int horizon,
                             double level = 0.95);

// Psi weights psi_0..psi_{count-1} of the integrated model.
std::vector<double> arima_psi_weights(const ArimaFit& fit, int count);

// Gradient of the CSS objective at the fitted parameters (c, phi, theta).
std::vector<double> css_gradient(std::span<const double> series, const ArimaFit& fit,
                                 std::size_t condition_on = 0);

}  // namespace gnarex
