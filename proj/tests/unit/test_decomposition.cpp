#include <doctest.h>

#include <gnarex/decomposition.hpp>
#include <gnarex/errors.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace gnarex;

namespace {

std::vector<double> trend_plus_wave(std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) {
        x[t] = 2.0 + 0.05 * static_cast<double>(t) + 3.0 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 12.0);
    }
    return x;
}

double max_reconstruction_error(const std::vector<double>& x, const Decomposition& d) {
    double worst = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        worst = std::max(worst, std::abs(d.trend[t] + d.seasonal[t] + d.residual[t] - x[t]));
    }
    return worst;
}

}  // namespace

TEST_CASE("constant series has flat trend and no seasonality") {
    const std::vector<double> x(36, 7.0);
    for (auto method : {DecompositionMethod::moving_average, DecompositionMethod::stl}) {
        const Decomposition d = deseasonalize(x, 12, method);
        for (std::size_t t = 0; t < x.size(); ++t) {
            CHECK(d.trend[t] == doctest::Approx(7.0));
            CHECK(std::abs(d.seasonal[t]) <= 1e-12);
            CHECK(std::abs(d.residual[t]) <= 1e-12);
        }
    }
}

TEST_CASE("moving average recovers a linear trend plus a sinusoid") {
    const auto x = trend_plus_wave(60);
    const Decomposition d = deseasonalize(x, 12);
    for (std::size_t t = 6; t + 6 < x.size(); ++t) {
        CHECK(std::abs(d.trend[t] - (2.0 + 0.05 * static_cast<double>(t))) <= 1e-9);
    }
    for (std::size_t t = 0; t < x.size(); ++t) {
        const double wave = 3.0 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 12.0);
        CHECK(std::abs(d.seasonal[t] - wave) <= 1e-6);
    }
    // Seasonal figure sums to zero over any full period.
    double sum = 0.0;
    for (std::size_t t = 0; t < 12; ++t) {
        sum += d.seasonal[t];
    }
    CHECK(std::abs(sum) <= 1e-12);
    CHECK(d.next_seasonal(12) == d.seasonal[48]);
}

TEST_CASE("stl finds the same wave") {
    const auto x = trend_plus_wave(72);
    const Decomposition d = deseasonalize(x, 12, DecompositionMethod::stl);
    for (std::size_t t = 12; t + 12 < x.size(); ++t) {
        const double wave = 3.0 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 12.0);
        CHECK(std::abs(d.seasonal[t] - wave) <= 0.05);
    }
}

TEST_CASE("components add back to the input") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> z;
    std::vector<double> x(50);
    for (auto& v : x) {
        v = z(rng);
    }
    for (auto method : {DecompositionMethod::moving_average, DecompositionMethod::stl}) {
        const Decomposition d = deseasonalize(x, 12, method);
        REQUIRE(d.trend.size() == x.size());
        CHECK(max_reconstruction_error(x, d) <= 1e-12);
    }
    const Decomposition odd = deseasonalize(x, 5);
    CHECK(max_reconstruction_error(x, odd) <= 1e-12);
}

TEST_CASE("decomposition argument checks") {
    CHECK_THROWS_AS(deseasonalize(std::vector<double>(23, 1.0), 12), RangeError);
    CHECK_NOTHROW(deseasonalize(std::vector<double>(24, 1.0), 12));
    CHECK_THROWS_AS(deseasonalize(std::vector<double>(30, 1.0), 1), ArgumentError);
    StlOptions bad;
    bad.seasonal_window = 4;
    CHECK_THROWS_AS(deseasonalize(std::vector<double>(40, 1.0), 12, DecompositionMethod::stl, bad), ArgumentError);
    Decomposition empty;
    CHECK_THROWS_AS((void)empty.next_seasonal(12), RangeError);
}
