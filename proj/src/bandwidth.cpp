#include "secondchange/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace secondchange {

std::vector<double> default_mv_grid() {
    std::vector<double> grid(12);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = 0.025 * static_cast<double>(i + 1);
    return grid;
}

MvSelection mv_select_path(std::span<const double> grid, std::span<const double> statistics) {
    const std::size_t l = grid.size();
    if (l < 7) throw std::invalid_argument("minimal volatility needs at least 7 candidate bandwidths");
    if (statistics.size() != l) throw std::invalid_argument("statistic path and grid differ in length");
    for (std::size_t i = 1; i < l; ++i)
        if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("bandwidth grid must be strictly increasing");

    MvSelection out;
    out.statistics.assign(statistics.begin(), statistics.end());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 4; i + 3 <= l; ++i) {  // 1-based centre
        double mean = 0.0;
        for (std::size_t j = i - 3; j <= i + 3; ++j) mean += statistics[j - 1];
        mean /= 7.0;
        double ss = 0.0;
        for (std::size_t j = i - 3; j <= i + 3; ++j) ss += (statistics[j - 1] - mean) * (statistics[j - 1] - mean);
        const double sd = std::sqrt(ss / 6.0);
        out.sd_profile.push_back(sd);
        if (sd < best) {  // NaN windows never win
            best = sd;
            out.index = i;
        }
    }
    if (out.index == 0) throw std::runtime_error("minimal volatility: no window with a finite statistic path");
    out.bandwidth = grid[out.index - 1];
    return out;
}

MvSelection mv_select(std::span<const double> grid, const std::function<double(double)>& statistic) {
    std::vector<double> path(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) path[i] = statistic(grid[i]);
    return mv_select_path(grid, path);
}

double gcv_score(std::span<const double> y, double bandwidth, const Kernel& kernel, Execution exec) {
    const std::size_t n = y.size();
    const std::vector<double> t = unit_grid(n);
    LocalLinearResult fit;
    try {
        fit = local_linear(t, y, bandwidth, kernel, exec);
    } catch (const SingularFitError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double rss = 0.0, trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - fit.intercept[i];
        rss += r * r;
        trace += fit.hat_diagonal[i];
    }
    const double denom = 1.0 - trace / static_cast<double>(n);
    if (!(denom > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return rss / static_cast<double>(n) / (denom * denom);
}

std::vector<double> default_gcv_grid(std::size_t n, std::size_t points) {
    if (n < 20) throw std::invalid_argument("GCV bandwidth selection needs n >= 20");
    if (points < 2) throw std::invalid_argument("GCV grid needs at least two points");
    const double lo = std::log(3.0 / static_cast<double>(n));
    const double hi = std::log(0.4);
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
    grid.front() = 3.0 / static_cast<double>(n);
    grid.back() = 0.4;
    return grid;
}

GcvSelection gcv_minimise(std::span<const double> y, std::span<const double> grid, const Kernel& kernel,
                          Execution exec) {
    GcvSelection out;
    out.grid.assign(grid.begin(), grid.end());
    out.scores.resize(grid.size());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.scores[i] = gcv_score(y, grid[i], kernel, exec);
        if (out.scores[i] < best) best = out.scores[i];
    }
    if (!std::isfinite(best)) throw std::runtime_error("GCV: no admissible bandwidth in the candidate grid");
    double scale = 0.0;
    for (double v : y) scale += v * v;
    scale /= static_cast<double>(y.size());
    const double tol = best * 1e-9 + 1e-24 * scale;
    for (std::size_t i = grid.size(); i-- > 0;) {
        if (out.scores[i] <= best + tol) {
            out.bandwidth = grid[i];
            break;
        }
    }
    return out;
}

GcvSelection gcv_select(const TimeSeries& series, const Kernel& kernel, Execution exec) {
    const std::vector<double> grid = default_gcv_grid(series.size());
    return gcv_minimise(series.values(), grid, kernel, exec);
}

GcvSelection gcv_select_variance(const Residuals& res, const Kernel& kernel, Execution exec) {
    std::vector<double> sq(res.size());
    for (std::size_t i = 0; i < res.size(); ++i) sq[i] = res.e[i] * res.e[i];
    const std::vector<double> grid = default_gcv_grid(res.size());
    return gcv_minimise(sq, grid, kernel, exec);
}

}  // namespace secondchange
