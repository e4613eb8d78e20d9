#include "secondchange/bootstrap.hpp"

#include "secondchange/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace secondchange {

std::size_t resolve_window(const BootstrapConfig& cfg, std::size_t n) {
    std::size_t m = cfg.window_m;
    if (m == 0) {
        m = static_cast<std::size_t>(std::cbrt(static_cast<double>(n)));
        while ((m + 1) * (m + 1) * (m + 1) <= n) ++m;
        while (m > 0 && m * m * m > n) --m;
    }
    if (m < 2 || 2 * m >= n) {
        std::ostringstream msg;
        msg << "bootstrap window m = " << m << " must satisfy 2 <= m < n/2 (n = " << n << ")";
        throw std::invalid_argument(msg.str());
    }
    return m;
}

void validate(const BootstrapConfig& cfg) {
    if (cfg.replicates < 199) throw std::invalid_argument("bootstrap needs at least 199 replicates");
    if (cfg.alphas.empty()) throw std::invalid_argument("at least one significance level is required");
    for (double a : cfg.alphas)
        if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("significance levels must lie in (0, 1)");
}

std::vector<double> run_replicates(std::size_t replicates, std::size_t draws, std::uint64_t seed,
                                   const ReplicateStatistic& statistic, Execution exec) {
    std::vector<double> out(replicates);
    if (exec == Execution::serial) {
        std::vector<double> R(draws);
        for (std::size_t r = 0; r < replicates; ++r) {
            NormalStream(derive_seed(seed, Stream::bootstrap, r)).fill(R);
            out[r] = statistic(R);
        }
        return out;
    }
    const auto count = static_cast<std::ptrdiff_t>(replicates);
#pragma omp parallel
    {
        std::vector<double> R(draws);
#pragma omp for schedule(static)
        for (std::ptrdiff_t rr = 0; rr < count; ++rr) {
            const auto r = static_cast<std::size_t>(rr);
            NormalStream(derive_seed(seed, Stream::bootstrap, r)).fill(R);
            out[r] = statistic(R);
        }
    }
    return out;
}

std::size_t order_index(std::size_t replicates, double alpha) {
    const double raw = static_cast<double>(replicates) * (1.0 - alpha);
    // guard against 1 - alpha landing a hair below an integer multiple
    auto k = static_cast<std::size_t>(std::floor(raw + 1e-9));
    return std::clamp<std::size_t>(k, 1, replicates);
}

double order_quantile(std::span<const double> sorted, double alpha) {
    if (sorted.empty()) throw std::invalid_argument("empty bootstrap sample");
    return sorted[order_index(sorted.size(), alpha) - 1];
}

double order_p_value(std::span<const double> sorted, double statistic) {
    if (sorted.empty()) throw std::invalid_argument("empty bootstrap sample");
    const auto below = static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), statistic) - sorted.begin());
    return 1.0 - static_cast<double>(below) / static_cast<double>(sorted.size());
}

}  // namespace secondchange
