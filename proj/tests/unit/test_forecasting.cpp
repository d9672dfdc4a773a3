#include <doctest.h>

#include "fixtures.hpp"

#include <gnarex/errors.hpp>
#include <gnarex/forecasting.hpp>
#include <gnarex/simulation.hpp>

using namespace gnarex;

namespace {

// A fit with hand-set parameters on the 3-node path.
GnarexFit manual_fit(const GnarexSpec& spec, const GnarexParams& params, const PanelSeries& panel) {
    GnarexFit f = fit(panel, spec);
    f.params = params;
    f.residual_variance = params.sigma2;
    return f;
}

ForecastResult single(double point, double lower, double upper) {
    ForecastResult r;
    r.horizon = 1;
    r.node_point = Eigen::MatrixXd::Constant(1, 1, point);
    r.node_lower = Eigen::MatrixXd::Constant(1, 1, lower);
    r.node_upper = Eigen::MatrixXd::Constant(1, 1, upper);
    r.edge_point = r.edge_lower = r.edge_upper = Eigen::MatrixXd::Zero(0, 1);
    return r;
}

}  // namespace

TEST_CASE("all-zero parameters forecast zero with +-z sigma intervals") {
    const auto net = fixture::path3();
    const PanelSeries panel = fixture::random_panel(net, 20, 1);
    const GnarexSpec spec(1, {1});
    GnarexParams params = GnarexParams::zeros(spec);
    params.sigma2 = 0.25;
    const ForecastResult fc = forecast(manual_fit(spec, params, panel), 1, 0.95);
    CHECK(fc.node_point.cwiseAbs().maxCoeff() == 0.0);
    CHECK(fc.edge_point.cwiseAbs().maxCoeff() == 0.0);
    CHECK(fc.node_upper(0, 0) == doctest::Approx(1.959964 * 0.5).epsilon(1e-6));
    CHECK(fc.edge_lower(1, 0) == doctest::Approx(-1.959964 * 0.5).epsilon(1e-6));
}

TEST_CASE("pure autoregression forecasts alpha times the last value") {
    const auto net = fixture::path3();
    const PanelSeries panel = fixture::random_panel(net, 20, 2);
    const GnarexSpec spec(1, {0});
    GnarexParams params = GnarexParams::zeros(spec);
    params.alpha[0] = 0.6;
    params.sigma2 = 1.0;
    const ForecastResult fc = forecast(manual_fit(spec, params, panel), 3, 0.9);
    for (Eigen::Index i = 0; i < 3; ++i) {
        const double last = panel.node_values()(i, 19);
        CHECK(fc.node_point(i, 0) == doctest::Approx(0.6 * last));
        CHECK(fc.node_point(i, 2) == doctest::Approx(0.216 * last));
        // Var of the 2-step error is sigma2 (1 + alpha^2).
        const double z = normal_quantile(0.95);
        CHECK(fc.node_upper(i, 1) - fc.node_point(i, 1) == doctest::Approx(z * std::sqrt(1.0 + 0.36)));
    }
}

TEST_CASE("forecast interval invariants") {
    const auto net = std::make_shared<const StaticNetwork>(generate_graph(GraphModel::erdos_renyi(8, 0.4), 5));
    const auto regime = table_regime(3, GraphKind::erdos_renyi, 8);
    const PanelSeries panel = simulate_panel(net, regime, 9);
    const GnarexFit f = fit(panel, regime.spec);
    const ForecastResult narrow = forecast(f, 4, 0.8);
    const ForecastResult wide = forecast(f, 4, 0.95);
    CHECK((narrow.node_lower.array() <= narrow.node_point.array()).all());
    CHECK((narrow.node_point.array() <= narrow.node_upper.array()).all());
    CHECK(((narrow.node_upper - narrow.node_point) - (narrow.node_point - narrow.node_lower)).cwiseAbs().maxCoeff() <=
          1e-12);
    CHECK((wide.node_lower.array() <= narrow.node_lower.array()).all());
    CHECK((wide.edge_upper.array() >= narrow.edge_upper.array()).all());
    CHECK(narrow.node_point.isApprox(wide.node_point));
    for (Eigen::Index h = 1; h < 4; ++h) {
        CHECK(((wide.node_upper.col(h) - wide.node_point.col(h)).array() >=
               (wide.node_upper.col(h - 1) - wide.node_point.col(h - 1)).array() - 1e-15)
                  .all());
    }
    CHECK_THROWS_AS(forecast(f, 0), ArgumentError);
    CHECK_THROWS_AS(forecast(f, 1, 1.0), ArgumentError);
}

TEST_CASE("zero residual variance gives zero-width intervals") {
    const auto net = fixture::path3();
    const PanelSeries panel = fixture::random_panel(net, 20, 3);
    const GnarexSpec spec(1, {1});
    GnarexParams params = GnarexParams::zeros(spec);
    params.alpha[0] = 0.3;
    const ForecastResult fc = forecast(manual_fit(spec, params, panel), 1);
    CHECK(fc.node_upper == fc.node_point);
    CHECK(fc.edge_lower == fc.edge_point);
}

TEST_CASE("model averaging") {
    SUBCASE("uniform mean") {
        const auto avg = model_average({single(1.0, 0.0, 1.0), single(2.0, 0.0, 2.0), single(3.0, 0.5, 3.5)});
        CHECK(avg.node_point(0, 0) == doctest::Approx(2.0));
    }
    SUBCASE("union interval") {
        const auto avg = model_average({single(0.5, 0.0, 1.0), single(1.0, 0.5, 2.0)});
        CHECK(avg.node_lower(0, 0) == 0.0);
        CHECK(avg.node_upper(0, 0) == 2.0);
    }
    SUBCASE("idempotent") {
        const auto one = single(0.1, -0.3, 0.7);
        const auto avg = model_average({one, one, one, one, one, one, one, one, one});
        CHECK(avg.node_point(0, 0) == 0.1);
        CHECK(avg.node_lower(0, 0) == -0.3);
        CHECK(avg.node_upper(0, 0) == 0.7);
    }
    SUBCASE("weights") {
        const auto avg = model_average({single(1.0, 0, 1), single(3.0, 0, 3)}, std::vector<double>{0.25, 0.75});
        CHECK(avg.node_point(0, 0) == doctest::Approx(2.5));
        CHECK_THROWS_AS(model_average({single(1, 0, 1), single(2, 0, 2)}, std::vector<double>{0.5, 0.6}),
                        ArgumentError);
        CHECK_THROWS_AS(model_average({single(1, 0, 1), single(2, 0, 2)}, std::vector<double>{-0.5, 1.5}),
                        ArgumentError);
    }
    SUBCASE("shape mismatch") {
        ForecastResult other = single(1, 0, 1);
        other.node_point = Eigen::MatrixXd::Zero(2, 1);
        CHECK_THROWS_AS(model_average({single(1, 0, 1), other}), ArgumentError);
        CHECK_THROWS_AS(model_average({}), ArgumentError);
    }
}

TEST_CASE("binomial inclusion reference") {
    CHECK(std::abs(binomial_inclusion_reference(20, 19, 0.95) - 0.7359) <= 1e-4);
    CHECK(std::abs(binomial_inclusion_reference(20, 17, 0.95) - 0.9841) <= 1e-4);
    CHECK(std::abs(binomial_inclusion_reference(20, 18, 0.95) - 0.9245) <= 1e-4);
    CHECK(std::abs(binomial_inclusion_reference(20, 20, 0.95) - 0.3585) <= 1e-4);
    CHECK(binomial_inclusion_reference(20, 0, 0.95) == doctest::Approx(1.0));
    for (int k = 0; k <= 20; ++k) {
        CHECK(binomial_inclusion_reference(20, k, 0.9) == doctest::Approx(oracle::binomial_tail(20, k, 0.9)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(binomial_inclusion_reference(20, 21, 0.5), ArgumentError);
    CHECK_THROWS_AS(binomial_inclusion_reference(20, 3, 1.5), ArgumentError);
}
