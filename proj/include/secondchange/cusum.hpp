#pragma once

#include "secondchange/smoothing.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace secondchange {

/// Partial sums S_i = sum_{j<=i} x_j and their drift-corrected values
/// S_i - (i/n) S_n, both accumulated left to right. drift.back() is exactly 0.
struct CusumSeries {
    std::vector<double> partial_sums;
    std::vector<double> drift;
};

[[nodiscard]] CusumSeries cusum_series(std::span<const double> summands);

/// max_i |S_i - (i/n) S_n| / sqrt(n).
[[nodiscard]] double cusum_max_statistic(std::span<const double> summands);

/// CUSUM of squared residuals, scaled by 1/sqrt(n).
[[nodiscard]] double cusum_variance_statistic(const Residuals& res);

/// Normalised lagged products W_i = e_i e_{i+k} / sigma2(t_i), with e_i = 0
/// beyond the sample (so the last k entries are 0).
struct WSequence {
    std::vector<double> w;
    std::size_t lag = 1;
    VarianceVariant variant = VarianceVariant::smooth;
};

[[nodiscard]] WSequence w_sequence(const Residuals& res, const VarianceFit& var_fit, std::size_t k);

[[nodiscard]] double cusum_correlation_statistic(const WSequence& w);

/// Centred block sums D_j = S_{j,m} - (m/n) S_n for j = 1..n-m+1, where
/// S_{j,m} = sum_{r=j}^{j+m-1} x_r.
[[nodiscard]] std::vector<double> block_deviations(std::span<const double> values, std::size_t m);

/// Phi_i = (1/sqrt(m(n-m+1))) sum_{j<=i} D_j R_j for precomputed D.
void phi_from_deviations(std::span<const double> deviations, std::size_t m, std::span<const double> R,
                         std::span<double> phi);

/// Multiplier-bootstrap partial-sum process Phi_{i,m}, i = 1..n-m+1.
[[nodiscard]] std::vector<double> bootstrap_phi(std::span<const double> values, std::size_t m,
                                                std::span<const double> R);

/// max_{m+1 <= i <= n-m+1} |Phi_i - (i/(n-m+1)) Phi_{n-m+1}|.
[[nodiscard]] double bootstrap_max_statistic(std::span<const double> phi, std::size_t m, std::size_t n);

}  // namespace secondchange
