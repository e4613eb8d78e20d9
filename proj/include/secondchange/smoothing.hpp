#pragma once

#include "secondchange/kernel.hpp"
#include "secondchange/parallel.hpp"
#include "secondchange/time_series.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace secondchange {

/// Raised when the weighted normal equations of a local linear fit are
/// singular at some grid point.
class SingularFitError : public std::runtime_error {
public:
    SingularFitError(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
    [[nodiscard]] double t() const noexcept { return t_; }

private:
    double t_;
};

/// Intercepts, slopes and hat-matrix diagonal of a local linear smoother
/// evaluated at the design points themselves.
struct LocalLinearResult {
    std::vector<double> intercept;
    std::vector<double> slope;
    std::vector<double> hat_diagonal;
};

/// Local linear smoother of (t_j, y_j) evaluated at every t_i with kernel
/// weights K((t_j - t_i) / bandwidth). `t` must be strictly increasing.
///
/// Every grid point is solved independently with a fixed left-to-right
/// summation order, so the serial and parallel paths agree bit for bit.
[[nodiscard]] LocalLinearResult local_linear(std::span<const double> t, std::span<const double> y,
                                             double bandwidth, const Kernel& kernel,
                                             Execution exec = Execution::parallel);

struct MeanFit {
    std::vector<double> mu_hat;
    std::vector<double> mu_dot_hat;
    double bandwidth = 0.0;
    KernelId kernel = KernelId::epanechnikov;
};

/// Nonparametric residuals e_i = Y_i - mu_hat(t_i).
///
/// `series_variance` is the sample variance of the observations; it scales the
/// positivity floor of variance fits built from these residuals.
struct Residuals {
    std::vector<double> e;
    double series_variance = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return e.size(); }
    /// 0-based access with e_i = 0 beyond the sample.
    [[nodiscard]] double at(std::size_t i) const noexcept { return i < e.size() ? e[i] : 0.0; }
};

enum class VarianceVariant { smooth, piecewise };

[[nodiscard]] std::string_view variance_variant_name(VarianceVariant v);

struct VarianceFit {
    std::vector<double> sigma2;
    VarianceVariant variant = VarianceVariant::smooth;
    double c = 0.0;  // variance bandwidth
    double b = 0.0;  // mean bandwidth the residuals came from
    std::optional<double> break_location;  // piecewise only
    std::size_t split = 0;                 // piecewise: last index (1-based) of segment one
    bool floor_applied = false;
    double floor = 0.0;
};

/// Output of the windowed contrast locator. `index` is 1-based.
struct VarianceBreak {
    std::size_t index = 0;
    double fraction = 0.0;
    double contrast = 0.0;
};

/// Floor for variance estimates: 1e-8 times the sample variance of Y (or 1e-8
/// if Y is constant).
[[nodiscard]] double variance_floor(double series_variance) noexcept;

/// Local linear estimate of the mean (intercept) and its slope at every t_i.
/// Requires 0 < b <= 0.5 and n * b >= 3.
[[nodiscard]] MeanFit local_linear_fit(const TimeSeries& series, double b, const Kernel& kernel = Kernel{},
                                       Execution exec = Execution::parallel);

[[nodiscard]] Residuals residuals(const TimeSeries& series, const MeanFit& fit);

/// Local linear fit of the squared residuals with bandwidth c, floored.
[[nodiscard]] VarianceFit variance_fit_smooth(const Residuals& res, double c, double b,
                                              const Kernel& kernel = Kernel{},
                                              Execution exec = Execution::parallel);

/// Windowed contrast M(i) = (1/L)(sum_{i-L+1..i} e_j^2 - sum_{i..i+L-1} e_j^2),
/// maximised in absolute value over floor(n zeta) <= i <= n - floor(n zeta) + 1.
/// Ties resolve to the smallest index.
[[nodiscard]] VarianceBreak variance_break_locate(const Residuals& res, std::size_t L, double zeta);

/// M(i) for a single 1-based index (no range checks beyond the sample).
[[nodiscard]] double window_contrast(const Residuals& res, std::size_t L, std::size_t i);

/// Separate local linear variance fits on 1..split and split+1..n (distances on
/// the original grid, windows truncated at the segment edge), stitched and
/// floored. split == n reproduces variance_fit_smooth exactly.
[[nodiscard]] VarianceFit variance_fit_piecewise(const Residuals& res, std::size_t split, double c,
                                                 double b, const Kernel& kernel = Kernel{},
                                                 Execution exec = Execution::parallel);

/// Fraction form: split = floor(n * t_star).
[[nodiscard]] VarianceFit variance_fit_piecewise(const Residuals& res, double t_star, double c, double b,
                                                 const Kernel& kernel = Kernel{},
                                                 Execution exec = Execution::parallel);

/// floor(n * t), robust to t having been formed as k / n in floating point.
[[nodiscard]] std::size_t floor_index(std::size_t n, double t);

/// Default regularisation L = floor(n^{1/3}) (integer cube root).
[[nodiscard]] std::size_t cube_root_floor(std::size_t n) noexcept;

}  // namespace secondchange
