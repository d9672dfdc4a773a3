#include "gnarex/decomposition.hpp"

#include "gnarex/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gnarex {

double Decomposition::next_seasonal(int period) const {
    if (period < 1 || seasonal.size() < static_cast<std::size_t>(period)) {
        throw RangeError("seasonal component shorter than one period");
    }
    return seasonal[seasonal.size() - static_cast<std::size_t>(period)];
}

namespace {

Decomposition moving_average_decomposition(std::span<const double> x, int period) {
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    const std::ptrdiff_t half = period / 2;
    std::vector<double> trend(x.size(), 0.0);
    const std::ptrdiff_t lo = half;
    const std::ptrdiff_t hi = n - 1 - half;  // inclusive
    for (std::ptrdiff_t t = lo; t <= hi; ++t) {
        double s = 0.0;
        if (period % 2 == 0) {
            s = 0.5 * (x[static_cast<std::size_t>(t - half)] + x[static_cast<std::size_t>(t + half)]);
            for (std::ptrdiff_t j = -half + 1; j <= half - 1; ++j) {
                s += x[static_cast<std::size_t>(t + j)];
            }
        } else {
            for (std::ptrdiff_t j = -half; j <= half; ++j) {
                s += x[static_cast<std::size_t>(t + j)];
            }
        }
        trend[static_cast<std::size_t>(t)] = s / period;
    }
    for (std::ptrdiff_t t = 0; t < lo; ++t) {
        trend[static_cast<std::size_t>(t)] = trend[static_cast<std::size_t>(lo)];
    }
    for (std::ptrdiff_t t = hi + 1; t < n; ++t) {
        trend[static_cast<std::size_t>(t)] = trend[static_cast<std::size_t>(hi)];
    }

    std::vector<double> position_sum(static_cast<std::size_t>(period), 0.0);
    std::vector<double> position_count(static_cast<std::size_t>(period), 0.0);
    for (std::ptrdiff_t t = lo; t <= hi; ++t) {
        const auto pos = static_cast<std::size_t>(t % period);
        position_sum[pos] += x[static_cast<std::size_t>(t)] - trend[static_cast<std::size_t>(t)];
        position_count[pos] += 1.0;
    }
    std::vector<double> figure(static_cast<std::size_t>(period));
    for (std::size_t k = 0; k < figure.size(); ++k) {
        figure[k] = position_sum[k] / position_count[k];
    }
    const double centre = std::accumulate(figure.begin(), figure.end(), 0.0) / period;
    for (double& f : figure) {
        f -= centre;
    }

    Decomposition d;
    d.trend = std::move(trend);
    d.seasonal.resize(x.size());
    d.residual.resize(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) {
        d.seasonal[t] = figure[t % static_cast<std::size_t>(period)];
        d.residual[t] = x[t] - d.trend[t] - d.seasonal[t];
    }
    return d;
}

// Loess fit at abscissa `at` (0-based, may lie outside [0, n)) of y observed at 0..n-1.
double loess_at(const std::vector<double>& y, double at, int span, int degree) {
    const auto n = static_cast<std::ptrdiff_t>(y.size());
    const std::ptrdiff_t q = std::min<std::ptrdiff_t>(span, n);
    // window of q nearest positions
    auto left = static_cast<std::ptrdiff_t>(std::floor(at)) - (q - 1) / 2;
    left = std::clamp<std::ptrdiff_t>(left, 0, n - q);
    while (left > 0 && std::abs(at - static_cast<double>(left - 1)) < std::abs(at - static_cast<double>(left + q - 1))) {
        --left;
    }
    while (left + q < n && std::abs(at - static_cast<double>(left + q)) < std::abs(at - static_cast<double>(left))) {
        ++left;
    }
    double h = std::max(std::abs(at - static_cast<double>(left)), std::abs(at - static_cast<double>(left + q - 1)));
    if (span > n) {
        h += static_cast<double>(span - n) / 2.0;
    }
    h = std::max(h, 1e-12) * 1.000001;

    double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
    for (std::ptrdiff_t j = left; j < left + q; ++j) {
        const double dx = static_cast<double>(j) - at;
        const double u = std::abs(dx) / h;
        if (u >= 1.0) {
            continue;
        }
        const double w = std::pow(1.0 - u * u * u, 3);
        const double v = y[static_cast<std::size_t>(j)];
        sw += w;
        swx += w * dx;
        swy += w * v;
        swxx += w * dx * dx;
        swxy += w * dx * v;
    }
    if (sw <= 0.0) {
        return y[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(std::llround(at), 0, n - 1))];
    }
    if (degree == 0) {
        return swy / sw;
    }
    const double mean_x = swx / sw;
    const double var_x = swxx / sw - mean_x * mean_x;
    const double mean_y = swy / sw;
    if (var_x <= 1e-12) {
        return mean_y;
    }
    const double slope = (swxy / sw - mean_x * mean_y) / var_x;
    return mean_y + slope * (0.0 - mean_x);
}

std::vector<double> moving_average(const std::vector<double>& x, int width) {
    std::vector<double> out;
    if (static_cast<int>(x.size()) < width) {
        return out;
    }
    double s = std::accumulate(x.begin(), x.begin() + width, 0.0);
    out.push_back(s / width);
    for (std::size_t t = static_cast<std::size_t>(width); t < x.size(); ++t) {
        s += x[t] - x[t - static_cast<std::size_t>(width)];
        out.push_back(s / width);
    }
    return out;
}

int next_odd(double v) {
    auto k = static_cast<int>(std::ceil(v));
    return k % 2 == 0 ? k + 1 : k;
}

Decomposition stl_decomposition(std::span<const double> x, int period, const StlOptions& opt) {
    if (opt.seasonal_window < 3 || opt.seasonal_window % 2 == 0) {
        throw ArgumentError("STL seasonal window must be odd and >= 3");
    }
    const std::size_t n = x.size();
    const auto np = static_cast<std::size_t>(period);
    const int ns = opt.seasonal_window;
    const int nl = next_odd(period);
    const int nt = next_odd(1.5 * period / (1.0 - 1.5 / ns));

    std::vector<double> y(x.begin(), x.end());
    std::vector<double> trend(n, 0.0);
    std::vector<double> seasonal(n, 0.0);

    for (int iter = 0; iter < std::max(1, opt.inner_iterations); ++iter) {
        // cycle-subseries smoothing, extended one period on each side
        std::vector<double> cycle(n + 2 * np, 0.0);
        for (std::size_t pos = 0; pos < np; ++pos) {
            std::vector<double> sub;
            for (std::size_t t = pos; t < n; t += np) {
                sub.push_back(y[t] - trend[t]);
            }
            if (sub.empty()) {
                continue;
            }
            for (std::ptrdiff_t j = -1; j <= static_cast<std::ptrdiff_t>(sub.size()); ++j) {
                const double v = loess_at(sub, static_cast<double>(j), ns, opt.seasonal_degree);
                const auto idx = static_cast<std::ptrdiff_t>(pos) + (j + 1) * static_cast<std::ptrdiff_t>(np);
                if (idx >= 0 && idx < static_cast<std::ptrdiff_t>(cycle.size())) {
                    cycle[static_cast<std::size_t>(idx)] = v;
                }
            }
        }
        // low-pass filter: MA(np), MA(np), MA(3), loess(nl)
        auto low = moving_average(moving_average(moving_average(cycle, period), period), 3);
        low.resize(n);
        std::vector<double> low_smooth(n);
        for (std::size_t t = 0; t < n; ++t) {
            low_smooth[t] = loess_at(low, static_cast<double>(t), nl, opt.trend_degree);
        }
        for (std::size_t t = 0; t < n; ++t) {
            seasonal[t] = cycle[t + np] - low_smooth[t];
        }
        std::vector<double> deseason(n);
        for (std::size_t t = 0; t < n; ++t) {
            deseason[t] = y[t] - seasonal[t];
        }
        for (std::size_t t = 0; t < n; ++t) {
            trend[t] = loess_at(deseason, static_cast<double>(t), nt, opt.trend_degree);
        }
    }

    Decomposition d;
    d.trend = std::move(trend);
    d.seasonal = std::move(seasonal);
    d.residual.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        d.residual[t] = x[t] - d.trend[t] - d.seasonal[t];
    }
    return d;
}

}  // namespace

Decomposition deseasonalize(std::span<const double> x, int period, DecompositionMethod method,
                            const StlOptions& stl) {
    if (period < 2) {
        throw ArgumentError("seasonal period must be >= 2");
    }
    if (x.size() < 2 * static_cast<std::size_t>(period)) {
        throw RangeError("decomposition needs at least two periods (" + std::to_string(2 * period) +
                         " values), got " + std::to_string(x.size()));
    }
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw DataError("decomposition input contains non-finite values");
        }
    }
    return method == DecompositionMethod::stl ? stl_decomposition(x, period, stl)
                                              : moving_average_decomposition(x, period);
}

}  // namespace gnarex
