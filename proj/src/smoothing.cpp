#include "secondchange/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace secondchange {

namespace {

struct PointFit {
    double intercept;
    double slope;
    double hat;
    bool singular;
};

PointFit fit_point(std::span<const double> t, std::span<const double> y, std::size_t i, double bandwidth,
                   const Kernel& kernel) {
    const double ti = t[i];
    const auto lo = std::lower_bound(t.begin(), t.end(), ti - bandwidth) - t.begin();
    const auto hi = std::upper_bound(t.begin(), t.end(), ti + bandwidth) - t.begin();
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, r0 = 0.0, r1 = 0.0;
    for (auto j = lo; j < hi; ++j) {
        const double d = t[j] - ti;
        const double w = kernel(d / bandwidth);
        s0 += w;
        s1 += w * d;
        s2 += w * d * d;
        r0 += w * y[j];
        r1 += w * d * y[j];
    }
    const double det = s0 * s2 - s1 * s1;
    if (!(s0 > 0.0) || !(det > 1e-12 * s0 * s2)) return {0.0, 0.0, 0.0, true};
    return {(s2 * r0 - s1 * r1) / det, (s0 * r1 - s1 * r0) / det, kernel(0.0) * s2 / det, false};
}

[[noreturn]] void throw_singular(double t) {
    std::ostringstream msg;
    msg << "singular local linear system at t = " << t << " (too few points with positive weight)";
    throw SingularFitError(msg.str(), t);
}

void check_bandwidth(double bandwidth, std::size_t n, const char* what) {
    if (!(bandwidth > 0.0) || bandwidth > 0.5) {
        std::ostringstream msg;
        msg << what << " bandwidth must lie in (0, 0.5], got " << bandwidth;
        throw std::invalid_argument(msg.str());
    }
    if (static_cast<double>(n) * bandwidth < 3.0) {
        std::ostringstream msg;
        msg << what << " bandwidth " << bandwidth << " gives n*b < 3 for n = " << n;
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

std::string_view variance_variant_name(VarianceVariant v) {
    return v == VarianceVariant::smooth ? "smooth" : "piecewise";
}

LocalLinearResult local_linear(std::span<const double> t, std::span<const double> y, double bandwidth,
                               const Kernel& kernel, Execution exec) {
    if (t.size() != y.size()) throw std::invalid_argument("local_linear: t and y differ in length");
    if (!(bandwidth > 0.0)) throw std::invalid_argument("local_linear: bandwidth must be positive");
    const std::size_t n = t.size();
    LocalLinearResult out;
    out.intercept.resize(n);
    out.slope.resize(n);
    out.hat_diagonal.resize(n);
    // index of the first singular point, n if none
    std::size_t bad = n;
    if (exec == Execution::serial) {
        for (std::size_t i = 0; i < n; ++i) {
            const PointFit p = fit_point(t, y, i, bandwidth, kernel);
            if (p.singular) {
                bad = i;
                break;
            }
            out.intercept[i] = p.intercept;
            out.slope[i] = p.slope;
            out.hat_diagonal[i] = p.hat;
        }
    } else {
        const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) reduction(min : bad)
        for (std::ptrdiff_t ii = 0; ii < count; ++ii) {
            const auto i = static_cast<std::size_t>(ii);
            const PointFit p = fit_point(t, y, i, bandwidth, kernel);
            if (p.singular) {
                bad = std::min(bad, i);
                continue;
            }
            out.intercept[i] = p.intercept;
            out.slope[i] = p.slope;
            out.hat_diagonal[i] = p.hat;
        }
    }
    if (bad < n) throw_singular(t[bad]);
    return out;
}

double variance_floor(double series_variance) noexcept {
    return series_variance > 0.0 ? 1e-8 * series_variance : 1e-8;
}

MeanFit local_linear_fit(const TimeSeries& series, double b, const Kernel& kernel, Execution exec) {
    check_bandwidth(b, series.size(), "mean");
    const std::vector<double> t = unit_grid(series.size());
    LocalLinearResult r = local_linear(t, series.values(), b, kernel, exec);
    return {std::move(r.intercept), std::move(r.slope), b, kernel.id()};
}

Residuals residuals(const TimeSeries& series, const MeanFit& fit) {
    if (series.size() != fit.mu_hat.size())
        throw std::invalid_argument("residuals: fit and series differ in length");
    Residuals out;
    out.e.resize(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) out.e[i] = series[i] - fit.mu_hat[i];
    out.series_variance = sample_variance(series.values());
    return out;
}

namespace {

std::vector<double> squares(const Residuals& res) {
    std::vector<double> sq(res.size());
    for (std::size_t i = 0; i < res.size(); ++i) sq[i] = res.e[i] * res.e[i];
    return sq;
}

bool apply_floor(std::vector<double>& v, double floor) {
    bool applied = false;
    for (double& x : v) {
        if (!(x >= floor)) {
            x = floor;
            applied = true;
        }
    }
    return applied;
}

}  // namespace

VarianceFit variance_fit_smooth(const Residuals& res, double c, double b, const Kernel& kernel, Execution exec) {
    return variance_fit_piecewise(res, res.size(), c, b, kernel, exec);
}

VarianceFit variance_fit_piecewise(const Residuals& res, std::size_t split, double c, double b,
                                   const Kernel& kernel, Execution exec) {
    const std::size_t n = res.size();
    check_bandwidth(c, n, "variance");
    if (split > n) throw std::invalid_argument("variance_fit_piecewise: split beyond sample");
    const bool whole = split == n;
    if (!whole && (split < 3 || n - split < 3)) {
        std::ostringstream msg;
        msg << "degenerate variance segment: split at " << split << " of " << n
            << " leaves fewer than 3 points on one side";
        throw std::invalid_argument(msg.str());
    }
    const std::vector<double> t = unit_grid(n);
    const std::vector<double> sq = squares(res);

    VarianceFit out;
    out.sigma2.resize(n);
    out.c = c;
    out.b = b;
    out.split = split;
    out.variant = whole ? VarianceVariant::smooth : VarianceVariant::piecewise;
    std::span<const double> ts(t), ys(sq);
    LocalLinearResult first = local_linear(ts.first(split), ys.first(split), c, kernel, exec);
    std::copy(first.intercept.begin(), first.intercept.end(), out.sigma2.begin());
    if (!whole) {
        LocalLinearResult second = local_linear(ts.subspan(split), ys.subspan(split), c, kernel, exec);
        std::copy(second.intercept.begin(), second.intercept.end(),
                  out.sigma2.begin() + static_cast<std::ptrdiff_t>(split));
        out.break_location = static_cast<double>(split) / static_cast<double>(n);
    }
    out.floor = variance_floor(res.series_variance);
    out.floor_applied = apply_floor(out.sigma2, out.floor);
    return out;
}

std::size_t floor_index(std::size_t n, double t) {
    const double x = static_cast<double>(n) * t;
    const double r = std::round(x);
    if (std::abs(x - r) < 1e-9 * std::max(1.0, std::abs(x))) return static_cast<std::size_t>(r);
    return static_cast<std::size_t>(std::floor(x));
}

VarianceFit variance_fit_piecewise(const Residuals& res, double t_star, double c, double b,
                                   const Kernel& kernel, Execution exec) {
    if (!(t_star > 0.0) || t_star > 1.0)
        throw std::invalid_argument("variance_fit_piecewise: t_star must lie in (0, 1]");
    return variance_fit_piecewise(res, floor_index(res.size(), t_star), c, b, kernel, exec);
}

double window_contrast(const Residuals& res, std::size_t L, std::size_t i) {
    // 1-based: left window i-L+1..i, right window i..i+L-1
    double left = 0.0, right = 0.0;
    for (std::size_t j = i + 1 - L; j <= i; ++j) left += res.e[j - 1] * res.e[j - 1];
    for (std::size_t j = i; j <= i + L - 1; ++j) right += res.e[j - 1] * res.e[j - 1];
    return (left - right) / static_cast<double>(L);
}

VarianceBreak variance_break_locate(const Residuals& res, std::size_t L, double zeta) {
    const std::size_t n = res.size();
    if (L < 1) throw std::invalid_argument("locator window L must be at least 1");
    if (!(zeta > 0.0 && zeta < 0.5)) throw std::invalid_argument("locator trim zeta must lie in (0, 0.5)");
    const std::size_t trim = floor_index(n, zeta);
    if (trim < L) {
        std::ostringstream msg;
        msg << "locator window L = " << L << " exceeds the trimmed range floor(n*zeta) = " << trim;
        throw std::invalid_argument(msg.str());
    }
    const std::size_t lo = trim;
    const std::size_t hi = n - trim + 1;
    if (hi < lo || hi + L - 1 > n) throw std::invalid_argument("locator range is empty");
    VarianceBreak best{lo, 0.0, window_contrast(res, L, lo)};
    for (std::size_t i = lo + 1; i <= hi; ++i) {
        const double m = window_contrast(res, L, i);
        if (std::abs(m) > std::abs(best.contrast)) best = {i, 0.0, m};
    }
    best.fraction = static_cast<double>(best.index) / static_cast<double>(n);
    return best;
}

std::size_t cube_root_floor(std::size_t n) noexcept {
    auto m = static_cast<std::size_t>(std::cbrt(static_cast<double>(n)));
    while ((m + 1) * (m + 1) * (m + 1) <= n) ++m;
    while (m > 0 && m * m * m > n) --m;
    return m;
}

}  // namespace secondchange
