#pragma once

#include "secondchange/bootstrap.hpp"
#include "secondchange/cusum.hpp"
#include "secondchange/smoothing.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace secondchange {

enum class ChangeTarget { variance, correlation };

/// CUSUM-argmax change-point estimate. `index` is 1-based and fraction = index/n.
struct ChangePointEstimate {
    std::size_t index = 0;
    double fraction = 0.0;
    double objective = 0.0;
    ChangeTarget target = ChangeTarget::variance;
    std::size_t lag = 0;  // correlation target only
};

/// Segment means of the summands before and after the change point.
struct DeltaEstimate {
    double before = 0.0;
    double after = 0.0;
    double delta = 0.0;  // after - before
};

/// argmax_{1<=m<=n} (S_m - (m/n) S_n)^2 over arbitrary summands, smallest index on ties.
[[nodiscard]] ChangePointEstimate cusum_argmax(std::span<const double> summands);

/// Estimator for the variance change point from squared residuals.
[[nodiscard]] ChangePointEstimate variance_cp_argmax(const Residuals& res);

/// Estimator for the lag-k correlation change point from e_j e_{j+k} / sigma2*(t_j).
[[nodiscard]] ChangePointEstimate correlation_cp_argmax(const Residuals& res, const VarianceFit& var_fit,
                                                        std::size_t k);

/// (1/s) sum_{j<=s} x_j and (1/(n-s)) sum_{j>s} x_j with s = cp.index.
[[nodiscard]] DeltaEstimate segment_delta(std::span<const double> summands, std::size_t split);

[[nodiscard]] DeltaEstimate variance_delta(const Residuals& res, const ChangePointEstimate& cp);
[[nodiscard]] DeltaEstimate correlation_delta(const Residuals& res, const VarianceFit& var_fit,
                                              const ChangePointEstimate& cp, std::size_t k);

/// 3 / (t^2 (1-t)^2) * int_0^1 U(s)^2 ds where U(s) = (1/n) S_{floor(ns)} - (s/n) S_n.
/// U is affine on each cell [j/n, (j+1)/n), so the integral is evaluated cell by cell
/// in closed form. Throws if t is not strictly inside (0, 1).
[[nodiscard]] double l2_cusum_statistic(std::span<const double> summands, double t);

/// int_0^1 U(s)^2 ds alone (no normalisation).
[[nodiscard]] double l2_cusum_integral(std::span<const double> summands);

[[nodiscard]] double relevant_variance_statistic(const Residuals& res, const ChangePointEstimate& cp);
[[nodiscard]] double relevant_correlation_statistic(const Residuals& res, const VarianceFit& var_fit,
                                                    const ChangePointEstimate& cp, std::size_t k);

/// x_j - delta * 1(j >= split), j 1-based.
[[nodiscard]] std::vector<double> delta_adjusted(std::span<const double> summands, double delta,
                                                 std::size_t split);

/// (i/n) t - min(i/n, t).
[[nodiscard]] double relevant_weight(std::size_t i, std::size_t n, double t) noexcept;

/// (1/n) (6 / (t^2 (1-t)^2)) sum_{i=m+1}^{n-m+1} (Phi_i - (i/(n-m+1)) Phi_{n-m+1}) w(i).
[[nodiscard]] double relevant_bootstrap_statistic(std::span<const double> phi, std::size_t m, std::size_t n,
                                                  double t);

/// Bootstrap sample of the relevant-change statistic for arbitrary summands
/// (squared residuals or normalised products), unsorted.
[[nodiscard]] std::vector<double> relevant_bootstrap(std::span<const double> summands,
                                                     const ChangePointEstimate& cp, const DeltaEstimate& delta,
                                                     std::size_t m, const BootstrapConfig& cfg);

[[nodiscard]] std::vector<double> relevant_variance_bootstrap(const Residuals& res, const ChangePointEstimate& cp,
                                                              const DeltaEstimate& delta, std::size_t m,
                                                              const BootstrapConfig& cfg);

[[nodiscard]] std::vector<double> relevant_correlation_bootstrap(const Residuals& res,
                                                                 const VarianceFit& var_fit,
                                                                 const ChangePointEstimate& cp,
                                                                 const DeltaEstimate& delta, std::size_t k,
                                                                 std::size_t m, const BootstrapConfig& cfg);

/// Rejection rule statistic > delta^2 + quantile * delta / sqrt(n).
[[nodiscard]] double relevant_threshold(double delta, double quantile, std::size_t n) noexcept;

/// 1 - B*/B with B* = #{r : delta^2 + M_(r) delta / sqrt(n) <= statistic}.
[[nodiscard]] double relevant_p_value(std::span<const double> sorted, double statistic, double delta,
                                      std::size_t n);

/// Normal-limit power approximation
///   1 - Psi( sqrt(n) (delta^2 - Delta^2) / |Delta| + v_{1-alpha} delta / |Delta| )
/// with Psi = N(0, sd^2) and v_{1-alpha} its quantile.
[[nodiscard]] double power_approximation(double delta, double abs_change, std::size_t n, double sd,
                                         double alpha);

}  // namespace secondchange
