#include "secondchange/cusum.hpp"

#include <cassert>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace secondchange {

CusumSeries cusum_series(std::span<const double> summands) {
    const std::size_t n = summands.size();
    CusumSeries out;
    out.partial_sums.resize(n);
    out.drift.resize(n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += summands[i];
        out.partial_sums[i] = s;
    }
    const double total = n > 0 ? out.partial_sums.back() : 0.0;
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        out.drift[i] = out.partial_sums[i] - static_cast<double>(i + 1) / dn * total;
    assert(n == 0 || out.drift.back() == 0.0);
    return out;
}

double cusum_max_statistic(std::span<const double> summands) {
    if (summands.size() < 2) throw std::invalid_argument("CUSUM statistic needs n >= 2");
    const CusumSeries c = cusum_series(summands);
    if (c.drift.back() != 0.0) throw std::logic_error("CUSUM drift not pinned at i = n");
    double best = 0.0;
    for (double d : c.drift) best = std::max(best, std::abs(d));
    return best / std::sqrt(static_cast<double>(summands.size()));
}

double cusum_variance_statistic(const Residuals& res) {
    std::vector<double> sq(res.size());
    for (std::size_t i = 0; i < res.size(); ++i) sq[i] = res.e[i] * res.e[i];
    return cusum_max_statistic(sq);
}

WSequence w_sequence(const Residuals& res, const VarianceFit& var_fit, std::size_t k) {
    const std::size_t n = res.size();
    if (var_fit.sigma2.size() != n) throw std::invalid_argument("w_sequence: variance fit length mismatch");
    if (k < 1) throw std::invalid_argument("w_sequence: lag must be at least 1");
    if (4 * k >= n) throw std::invalid_argument("w_sequence: lag must be below n/4");
    WSequence out;
    out.lag = k;
    out.variant = var_fit.variant;
    out.w.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.w[i] = res.at(i) * res.at(i + k) / var_fit.sigma2[i];
    return out;
}

double cusum_correlation_statistic(const WSequence& w) { return cusum_max_statistic(w.w); }

std::vector<double> block_deviations(std::span<const double> values, std::size_t m) {
    const std::size_t n = values.size();
    if (m < 1 || m > n) throw std::invalid_argument("bootstrap window m must satisfy 1 <= m <= n");
    double total = 0.0;
    for (double v : values) total += v;
    const double centre = static_cast<double>(m) / static_cast<double>(n) * total;
    std::vector<double> d(n - m + 1);
    for (std::size_t j = 0; j + m <= n; ++j) {
        double s = 0.0;
        for (std::size_t r = j; r < j + m; ++r) s += values[r];
        d[j] = s - centre;
    }
    return d;
}

void phi_from_deviations(std::span<const double> deviations, std::size_t m, std::span<const double> R,
                         std::span<double> phi) {
    const std::size_t len = deviations.size();
    if (R.size() != len || phi.size() != len) {
        std::ostringstream msg;
        msg << "bootstrap multipliers: expected " << len << " draws, got " << R.size();
        throw std::invalid_argument(msg.str());
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(m) * static_cast<double>(len));
    double acc = 0.0;
    for (std::size_t j = 0; j < len; ++j) {
        acc += deviations[j] * R[j];
        phi[j] = scale * acc;
    }
}

std::vector<double> bootstrap_phi(std::span<const double> values, std::size_t m, std::span<const double> R) {
    const std::vector<double> d = block_deviations(values, m);
    std::vector<double> phi(d.size());
    phi_from_deviations(d, m, R, phi);
    return phi;
}

double bootstrap_max_statistic(std::span<const double> phi, std::size_t m, std::size_t n) {
    if (n < m || phi.size() != n - m + 1) throw std::invalid_argument("bootstrap_max_statistic: length mismatch");
    const std::size_t last = n - m + 1;  // 1-based index of the final Phi
    if (last < m + 1) throw std::invalid_argument("bootstrap_max_statistic: index range m+1..n-m+1 is empty");
    const double end = phi[last - 1];
    const double dl = static_cast<double>(last);
    double best = 0.0;
    for (std::size_t i = m + 1; i <= last; ++i)
        best = std::max(best, std::abs(phi[i - 1] - static_cast<double>(i) / dl * end));
    return best;
}

}  // namespace secondchange
