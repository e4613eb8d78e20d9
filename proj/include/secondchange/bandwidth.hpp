#pragma once

#include "secondchange/kernel.hpp"
#include "secondchange/parallel.hpp"
#include "secondchange/smoothing.hpp"
#include "secondchange/time_series.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace secondchange {

struct MvSelection {
    double bandwidth = 0.0;
    std::size_t index = 0;           // 1-based position in the grid
    std::vector<double> statistics;  // statistic at every grid point
    std::vector<double> sd_profile;  // SD(i) for i = 4..l-3
};

/// Default grid 0.025, 0.05, ..., 0.3.
[[nodiscard]] std::vector<double> default_mv_grid();

/// Minimal-volatility choice: evaluate the statistic along the grid and pick
/// the centre of the 7-point window with the smallest standard deviation.
[[nodiscard]] MvSelection mv_select(std::span<const double> grid,
                                    const std::function<double(double)>& statistic);

/// Same selection from an already evaluated statistic path.
[[nodiscard]] MvSelection mv_select_path(std::span<const double> grid, std::span<const double> statistics);

struct GcvSelection {
    double bandwidth = 0.0;
    std::vector<double> grid;
    std::vector<double> scores;  // NaN where the candidate was not admissible
};

/// (1/n) sum (y_i - yhat_i)^2 / (1 - tr(H)/n)^2 for the local linear smoother
/// on the unit grid. NaN if the fit is singular or the denominator degenerates.
[[nodiscard]] double gcv_score(std::span<const double> y, double bandwidth, const Kernel& kernel,
                               Execution exec = Execution::parallel);

/// Log-spaced candidates on [3/n, 0.4].
[[nodiscard]] std::vector<double> default_gcv_grid(std::size_t n, std::size_t points = 25);

/// Minimises the GCV score over the grid. Scores within round-off of the
/// minimum count as tied, and ties go to the largest bandwidth.
[[nodiscard]] GcvSelection gcv_minimise(std::span<const double> y, std::span<const double> grid,
                                        const Kernel& kernel, Execution exec = Execution::parallel);

[[nodiscard]] GcvSelection gcv_select(const TimeSeries& series, const Kernel& kernel = Kernel{},
                                      Execution exec = Execution::parallel);

/// GCV applied to the squared residuals (variance bandwidth c).
[[nodiscard]] GcvSelection gcv_select_variance(const Residuals& res, const Kernel& kernel = Kernel{},
                                               Execution exec = Execution::parallel);

}  // namespace secondchange
