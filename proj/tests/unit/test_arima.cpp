#include <doctest.h>

#include "fixtures.hpp"

#include <gnarex/arima.hpp>
#include <gnarex/errors.hpp>
#include <gnarex/forecasting.hpp>
#include <gnarex/random.hpp>
#include <gnarex/simulation.hpp>
#include <gnarex/var_ols.hpp>

#include <numeric>
#include <random>

using namespace gnarex;

namespace {

std::vector<double> iid(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::vector<double> x(n);
    for (auto& v : x) {
        v = z(rng);
    }
    return x;
}

std::vector<double> random_walk(std::size_t n, std::uint64_t seed) {
    std::vector<double> x = iid(n, seed);
    std::partial_sum(x.begin(), x.end(), x.begin());
    return x;
}

std::vector<double> ar1(std::size_t n, double phi, std::uint64_t seed) {
    std::vector<double> e = iid(n + 100, seed);
    std::vector<double> x(n + 100, 0.0);
    for (std::size_t t = 1; t < x.size(); ++t) {
        x[t] = phi * x[t - 1] + e[t];
    }
    return {x.begin() + 100, x.end()};
}

}  // namespace

TEST_CASE("random walk with drift on a straight line") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    const ArimaFit f = arima_fit(x, {0, 1, 0});
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.sigma2 == doctest::Approx(0.0));
    const auto fc = arima_forecast(f, x, 3);
    CHECK(fc.point[0] == doctest::Approx(6.0));
    CHECK(fc.point[2] == doctest::Approx(8.0));
    CHECK(fc.upper[0] == doctest::Approx(6.0));
}

TEST_CASE("arima(0,1,0) intervals widen like sqrt(h)") {
    const std::vector<double> x{1.0, 1.5, 1.2, 2.0, 2.4, 2.1, 3.0};
    const ArimaFit f = arima_fit(x, {0, 1, 0});
    CHECK(f.intercept == doctest::Approx((3.0 - 1.0) / 6.0));
    const auto fc = arima_forecast(f, x, 4, 0.9);
    const double h1 = fc.upper[0] - fc.point[0];
    CHECK(fc.upper[3] - fc.point[3] == doctest::Approx(2.0 * h1));
    CHECK(fc.point[0] == doctest::Approx(3.0 + 1.0 / 3.0));
}

TEST_CASE("ar(1) coefficient is recovered") {
    const auto x = ar1(2000, 0.7, 3);
    const ArimaFit f = arima_fit(x, {1, 0, 0});
    REQUIRE(f.phi.size() == 1);
    CHECK(std::abs(f.phi[0] - 0.7) < 0.05);
    CHECK(f.sigma2 == doctest::Approx(1.0).epsilon(0.1));
    const auto grad = css_gradient(x, f);
    for (double g : grad) {
        CHECK(std::abs(g) < 1e-6);
    }
}

TEST_CASE("ma(1) coefficient is recovered") {
    const auto e = iid(3001, 8);
    std::vector<double> x(3000);
    for (std::size_t t = 0; t < x.size(); ++t) {
        x[t] = e[t + 1] + 0.5 * e[t];
    }
    const ArimaFit f = arima_fit(x, {0, 0, 1});
    REQUIRE(f.theta.size() == 1);
    CHECK(std::abs(f.theta[0] - 0.5) < 0.06);
}

TEST_CASE("constant series fits without noise") {
    const std::vector<double> x(20, 4.5);
    const ArimaFit f = arima_fit(x, {0, 0, 0});
    CHECK(f.intercept == doctest::Approx(4.5));
    CHECK(f.sigma2 == doctest::Approx(0.0));
    CHECK(std::isfinite(f.aic));
    CHECK(arima_forecast(f, x, 2).point[1] == doctest::Approx(4.5));
}

TEST_CASE("forecast recursions") {
    SUBCASE("ar(1) around a mean") {
        ArimaFit f;
        f.order = {1, 0, 0};
        f.intercept = 0.0;
        f.phi = {0.5};
        f.sigma2 = 1.0;
        const std::vector<double> last{4.0};
        const auto fc = arima_forecast(f, last, 2);
        CHECK(fc.point[0] == doctest::Approx(2.0));
        CHECK(fc.point[1] == doctest::Approx(1.0));
        const double z = 1.959963984540054;
        CHECK(fc.upper[1] - fc.point[1] == doctest::Approx(z * std::sqrt(1.25)));
    }
    SUBCASE("arima(1,1,0)") {
        ArimaFit f;
        f.order = {1, 1, 0};
        f.intercept = 0.1;
        f.phi = {0.6};
        f.sigma2 = 0.0;
        const std::vector<double> last{5.0, 7.0};
        // w_next = 0.1 + 0.6 * 2 = 1.3
        CHECK(arima_forecast(f, last, 1).point[0] == doctest::Approx(8.3));
    }
    SUBCASE("ma(1) uses the stored residual") {
        ArimaFit f;
        f.order = {0, 0, 1};
        f.intercept = 10.0;
        f.theta = {0.4};
        f.sigma2 = 1.0;
        f.residual_tail = {7.5};
        const std::vector<double> last{12.0};
        const auto fc = arima_forecast(f, last, 2);
        CHECK(fc.point[0] == doctest::Approx(13.0));
        CHECK(fc.point[1] == doctest::Approx(10.0));
    }
    SUBCASE("argument checks") {
        ArimaFit f;
        f.order = {2, 1, 0};
        f.phi = {0.1, 0.1};
        CHECK_THROWS_AS(arima_forecast(f, std::vector<double>{1.0, 2.0, 3.0}, 0), ArgumentError);
        CHECK_THROWS_AS(arima_forecast(f, std::vector<double>{1.0}, 1), ArgumentError);
    }
}

TEST_CASE("psi weights") {
    ArimaFit f;
    f.order = {1, 1, 0};
    f.phi = {0.5};
    const auto psi = arima_psi_weights(f, 4);
    // (1 - 0.5B)(1 - B) inverse: 1, 1.5, 1.75, 1.875
    CHECK(psi[0] == doctest::Approx(1.0));
    CHECK(psi[1] == doctest::Approx(1.5));
    CHECK(psi[2] == doctest::Approx(1.75));
    CHECK(psi[3] == doctest::Approx(1.875));
}

TEST_CASE("AIC bookkeeping") {
    const auto x = ar1(300, 0.4, 12);
    const ArimaFit f = arima_fit(x, {2, 0, 1});
    const double n = static_cast<double>(f.n_used);
    CHECK(f.n_used == x.size() - 2);
    CHECK(f.log_likelihood == doctest::Approx(-0.5 * n * (std::log(2.0 * M_PI * f.sigma2) + 1.0)));
    CHECK(f.aic == doctest::Approx(-2.0 * f.log_likelihood + 2.0 * 5));
    const auto fc = arima_forecast(f, x, 6);
    for (std::size_t h = 1; h < 6; ++h) {
        CHECK(fc.upper[h] - fc.lower[h] >= fc.upper[h - 1] - fc.lower[h - 1] - 1e-12);
    }
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(arima_fit(std::vector<double>{1, 2, 3}, {1, 0, 1}), RangeError);
    CHECK_THROWS_AS(arima_fit(std::vector<double>{1, 2, std::nan(""), 4, 5, 6}, {0, 0, 0}), DataError);
    CHECK_THROWS_AS(arima_fit(std::vector<double>(20, 1.0), {-1, 0, 0}), ArgumentError);
    CHECK_THROWS_AS(auto_arima(std::vector<double>(9, 1.0)), RangeError);
    ArimaFitOptions opts;
    opts.condition_on = 1;
    CHECK_THROWS_AS(arima_fit(iid(50, 1), {2, 0, 0}, opts), ArgumentError);
    CHECK(ArimaOrder{1, 2, 3}.to_string() == "ARIMA(1,2,3)");
}

TEST_CASE("auto_arima order selection") {
    SUBCASE("white noise is usually (0,0,0)") {
        int hits = 0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            if (auto_arima(iid(500, 1000 + seed)).order == ArimaOrder{0, 0, 0}) {
                ++hits;
            }
        }
        CHECK(hits >= 30);
    }
    SUBCASE("random walks are differenced") {
        int hits = 0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            if (auto_arima(random_walk(500, 2000 + seed)).order.d >= 1) {
                ++hits;
            }
        }
        CHECK(hits >= 45);
    }
    SUBCASE("linear trend extrapolates") {
        std::vector<double> x(50);
        std::iota(x.begin(), x.end(), 1.0);
        const ArimaFit f = auto_arima(x);
        CHECK(arima_forecast(f, x, 1).point[0] == doctest::Approx(51.0).epsilon(0.5 / 51.0));
    }
    SUBCASE("returned AIC is the minimum over admissible candidates at the chosen d") {
        const auto x = ar1(300, 0.5, 77);
        const ArimaFit best = auto_arima(x);
        CHECK(best.order.d == select_differencing(x, 2));
        ArimaFitOptions opts;
        opts.condition_on = static_cast<std::size_t>(best.order.d + 3);
        for (int p = 0; p <= 3; ++p) {
            for (int q = 0; q <= 3; ++q) {
                const ArimaFit other = arima_fit(x, {p, best.order.d, q}, opts);
                if (!other.clamped && other.order.p + other.order.q <= 1) {
                    CHECK(best.aic <= other.aic + 1e-9);
                }
            }
        }
    }
}

TEST_CASE("KPSS differencing choice") {
    CHECK(kpss_level_statistic(std::vector<double>(30, 2.0)) == 0.0);
    CHECK(kpss_level_statistic(iid(500, 3)) < 0.463);
    CHECK(kpss_level_statistic(random_walk(500, 3)) > 0.463);
    CHECK(select_differencing(iid(500, 4), 2) == 0);
    CHECK(select_differencing(random_walk(500, 4), 2) == 1);
    std::vector<double> twice = random_walk(500, 5);
    std::partial_sum(twice.begin(), twice.end(), twice.begin());
    CHECK(select_differencing(twice, 2) == 2);
    CHECK(select_differencing(twice, 1) == 1);
}

TEST_CASE("VAR OLS recovers a noiseless system") {
    // A slowly damped rotation keeps the state excited for the whole sample.
    const double r = 0.99;
    const double w = 0.7;
    Eigen::MatrixXd a(2, 2);
    a << r * std::cos(w), -r * std::sin(w), r * std::sin(w), r * std::cos(w);
    Eigen::VectorXd c(2);
    c << 1.0, -0.5;
    Eigen::MatrixXd y(2, 30);
    y.col(0) << 2.0, 1.0;
    for (Eigen::Index t = 1; t < 30; ++t) {
        y.col(t) = c + a * y.col(t - 1);
    }
    const VarOlsFit f = var_ols_fit(y, 1);
    CHECK(f.coefficients[0].isApprox(a, 1e-8));
    CHECK(f.intercept.isApprox(c, 1e-8));
    CHECK(f.residual_cov.cwiseAbs().maxCoeff() <= 1e-16);
    const Eigen::VectorXd next = var_ols_forecast(f, y);
    CHECK(next.isApprox(c + a * y.col(29), 1e-8));
    CHECK_THROWS_AS(var_ols_fit(Eigen::MatrixXd::Zero(3, 4), 1), RangeError);
}

TEST_CASE("restricted network model beats the unrestricted VAR out of sample") {
    // 3-node path, T = 400: fit on the first 300 columns, then score rolling
    // one-step predictions over the last 100 with the parameters held fixed.
    const auto net = fixture::path3();
    const auto regime = table_regime(1, GraphKind::erdos_renyi, 3);
    const NeighborhoodTables tables(*net, 1);
    int wins = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        SimulationRegime r = regime;
        r.length = 400;
        const PanelSeries panel = simulate_panel(net, r, derive_seed(seed, "var-oracle"));
        const Eigen::MatrixXd y = panel.stacked();
        const GnarexFit restricted = fit(panel.head(300), tables, regime.spec);
        const auto a = to_var(tables, regime.spec, restricted.params);
        const VarOlsFit unrestricted = var_ols_fit(y.leftCols(300), 1);
        double sse_restricted = 0.0;
        double sse_unrestricted = 0.0;
        for (Eigen::Index t = 300; t < 400; ++t) {
            sse_restricted += (y.col(t) - a[0] * y.col(t - 1)).squaredNorm();
            sse_unrestricted += (y.col(t) - var_ols_forecast(unrestricted, y.leftCols(t))).squaredNorm();
        }
        wins += sse_unrestricted >= sse_restricted ? 1 : 0;
    }
    CHECK(wins >= 40);
}
