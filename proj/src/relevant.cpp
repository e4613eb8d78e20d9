#include "secondchange/relevant.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace secondchange {

ChangePointEstimate cusum_argmax(std::span<const double> summands) {
    const std::size_t n = summands.size();
    if (n < 4) throw std::invalid_argument("change-point estimator needs n >= 4");
    const CusumSeries c = cusum_series(summands);
    ChangePointEstimate best;
    best.index = 1;
    best.objective = c.drift[0] * c.drift[0];
    for (std::size_t m = 2; m <= n; ++m) {
        const double v = c.drift[m - 1] * c.drift[m - 1];
        if (v > best.objective) {
            best.index = m;
            best.objective = v;
        }
    }
    best.fraction = static_cast<double>(best.index) / static_cast<double>(n);
    return best;
}

namespace {

std::vector<double> squared(const Residuals& res) {
    std::vector<double> sq(res.size());
    for (std::size_t i = 0; i < res.size(); ++i) sq[i] = res.e[i] * res.e[i];
    return sq;
}

}  // namespace

ChangePointEstimate variance_cp_argmax(const Residuals& res) {
    ChangePointEstimate cp = cusum_argmax(squared(res));
    cp.target = ChangeTarget::variance;
    return cp;
}

ChangePointEstimate correlation_cp_argmax(const Residuals& res, const VarianceFit& var_fit, std::size_t k) {
    ChangePointEstimate cp = cusum_argmax(w_sequence(res, var_fit, k).w);
    cp.target = ChangeTarget::correlation;
    cp.lag = k;
    return cp;
}

DeltaEstimate segment_delta(std::span<const double> summands, std::size_t split) {
    const std::size_t n = summands.size();
    if (split < 1 || split >= n) {
        std::ostringstream msg;
        msg << "change point at index " << split << " of " << n << " leaves an empty segment";
        throw std::invalid_argument(msg.str());
    }
    double first = 0.0, second = 0.0;
    for (std::size_t j = 0; j < split; ++j) first += summands[j];
    for (std::size_t j = split; j < n; ++j) second += summands[j];
    DeltaEstimate d;
    d.before = first / static_cast<double>(split);
    d.after = second / static_cast<double>(n - split);
    d.delta = d.after - d.before;
    return d;
}

DeltaEstimate variance_delta(const Residuals& res, const ChangePointEstimate& cp) {
    return segment_delta(squared(res), cp.index);
}

DeltaEstimate correlation_delta(const Residuals& res, const VarianceFit& var_fit, const ChangePointEstimate& cp,
                                std::size_t k) {
    // W_j = 0 for j > n - k, so the second segment effectively ends at n - k
    return segment_delta(w_sequence(res, var_fit, k).w, cp.index);
}

double l2_cusum_integral(std::span<const double> summands) {
    const std::size_t n = summands.size();
    if (n == 0) throw std::invalid_argument("empty summands");
    double total = 0.0;
    for (double v : summands) total += v;
    const double dn = static_cast<double>(n);
    const double slope = total / dn;  // U(s) = S_j / n - s * total / n on cell j
    const double h = 1.0 / dn;
    double integral = 0.0;
    double partial = 0.0;  // S_j
    for (std::size_t j = 0; j < n; ++j) {
        if (j > 0) partial += summands[j - 1];
        const double s0 = static_cast<double>(j) / dn;
        const double s1 = static_cast<double>(j + 1) / dn;
        const double u0 = partial / dn - s0 * slope;
        const double u1 = partial / dn - s1 * slope;
        integral += h * (u0 * u0 + u0 * u1 + u1 * u1) / 3.0;
    }
    return integral;
}

double l2_cusum_statistic(std::span<const double> summands, double t) {
    if (!(t > 0.0 && t < 1.0)) {
        std::ostringstream msg;
        msg << "change-point fraction " << t << " is not strictly inside (0, 1); the L2 statistic is undefined";
        throw std::invalid_argument(msg.str());
    }
    const double norm = t * t * (1.0 - t) * (1.0 - t);
    return 3.0 / norm * l2_cusum_integral(summands);
}

double relevant_variance_statistic(const Residuals& res, const ChangePointEstimate& cp) {
    return l2_cusum_statistic(squared(res), cp.fraction);
}

double relevant_correlation_statistic(const Residuals& res, const VarianceFit& var_fit,
                                      const ChangePointEstimate& cp, std::size_t k) {
    return l2_cusum_statistic(w_sequence(res, var_fit, k).w, cp.fraction);
}

std::vector<double> delta_adjusted(std::span<const double> summands, double delta, std::size_t split) {
    std::vector<double> out(summands.begin(), summands.end());
    for (std::size_t j = 1; j <= out.size(); ++j)
        if (j >= split) out[j - 1] -= delta;
    return out;
}

double relevant_weight(std::size_t i, std::size_t n, double t) noexcept {
    const double s = static_cast<double>(i) / static_cast<double>(n);
    return s * t - std::min(s, t);
}

double relevant_bootstrap_statistic(std::span<const double> phi, std::size_t m, std::size_t n, double t) {
    if (n < m || phi.size() != n - m + 1) throw std::invalid_argument("relevant_bootstrap_statistic: length mismatch");
    if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("relevant_bootstrap_statistic: t must lie in (0, 1)");
    const std::size_t last = n - m + 1;
    const double end = phi[last - 1];
    const double dl = static_cast<double>(last);
    double sum = 0.0;
    for (std::size_t i = m + 1; i <= last; ++i)
        sum += (phi[i - 1] - static_cast<double>(i) / dl * end) * relevant_weight(i, n, t);
    const double norm = t * t * (1.0 - t) * (1.0 - t);
    return sum * 6.0 / norm / static_cast<double>(n);
}

std::vector<double> relevant_bootstrap(std::span<const double> summands, const ChangePointEstimate& cp,
                                       const DeltaEstimate& delta, std::size_t m, const BootstrapConfig& cfg) {
    const std::size_t n = summands.size();
    const std::vector<double> adjusted = delta_adjusted(summands, delta.delta, cp.index);
    const std::vector<double> dev = block_deviations(adjusted, m);
    const double t = cp.fraction;
    return run_replicates(
        cfg.replicates, dev.size(), cfg.seed,
        [&](std::span<const double> R) {
            std::vector<double> phi(dev.size());
            phi_from_deviations(dev, m, R, phi);
            return relevant_bootstrap_statistic(phi, m, n, t);
        },
        cfg.exec);
}

std::vector<double> relevant_variance_bootstrap(const Residuals& res, const ChangePointEstimate& cp,
                                                const DeltaEstimate& delta, std::size_t m,
                                                const BootstrapConfig& cfg) {
    return relevant_bootstrap(squared(res), cp, delta, m, cfg);
}

std::vector<double> relevant_correlation_bootstrap(const Residuals& res, const VarianceFit& var_fit,
                                                   const ChangePointEstimate& cp, const DeltaEstimate& delta,
                                                   std::size_t k, std::size_t m, const BootstrapConfig& cfg) {
    return relevant_bootstrap(w_sequence(res, var_fit, k).w, cp, delta, m, cfg);
}

double relevant_threshold(double delta, double quantile, std::size_t n) noexcept {
    return delta * delta + quantile * delta / std::sqrt(static_cast<double>(n));
}

double relevant_p_value(std::span<const double> sorted, double statistic, double delta, std::size_t n) {
    if (sorted.empty()) throw std::invalid_argument("empty bootstrap sample");
    std::size_t count = 0;
    for (double m : sorted) {
        if (relevant_threshold(delta, m, n) <= statistic) ++count;
        else break;
    }
    return 1.0 - static_cast<double>(count) / static_cast<double>(sorted.size());
}

double power_approximation(double delta, double abs_change, std::size_t n, double sd, double alpha) {
    if (!(abs_change > 0.0)) throw std::invalid_argument("power approximation needs a non-zero change");
    if (!(sd > 0.0)) throw std::invalid_argument("power approximation needs a positive standard deviation");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    const boost::math::normal_distribution<double> psi(0.0, sd);
    const double v = boost::math::quantile(psi, 1.0 - alpha);
    const double arg = std::sqrt(static_cast<double>(n)) * (delta * delta - abs_change * abs_change) / abs_change +
                       v * delta / abs_change;
    return boost::math::cdf(boost::math::complement(psi, arg));
}

}  // namespace secondchange
