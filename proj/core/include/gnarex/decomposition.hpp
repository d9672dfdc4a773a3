#pragma once

#include <span>
#include <vector>

namespace gnarex {

enum class DecompositionMethod {
    moving_average,  // classical centred moving-average decomposition
    stl,             // loess-based seasonal-trend decomposition
};

struct Decomposition {
    std::vector<double> trend;
    std::vector<double> seasonal;
    std::vector<double> residual;

    // Seasonal value one step past the end of the series.
    [[nodiscard]] double next_seasonal(int period) const;
};

struct StlOptions {
    int seasonal_window = 7;  // odd, >= 7
    int inner_iterations = 2;
    int seasonal_degree = 0;
    int trend_degree = 1;
};

/**
 * Additive decomposition x = trend + seasonal + residual (residual is the
 * exact remainder).
 *
 * moving_average: centred 2xperiod moving average for even periods (plain
 * centred average for odd ones), ends extended by the nearest computed
 * value; seasonal = per-position mean of x - trend over the interior,
 * re-centred to sum to zero over a period.
 */
Decomposition deseasonalize(std::span<const double> x, int period = 12,
                            DecompositionMethod method = DecompositionMethod::moving_average,
                            const StlOptions& stl = {});

}  // namespace gnarex
