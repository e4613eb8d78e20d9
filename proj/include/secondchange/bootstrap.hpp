#pragma once

#include "secondchange/parallel.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace secondchange {

struct BootstrapConfig {
    std::size_t window_m = 0;  // 0 selects floor(n^{1/3})
    std::size_t replicates = 2000;
    std::uint64_t seed = 0;
    std::vector<double> alphas{0.10, 0.05};
    Execution exec = Execution::parallel;
};

/// Window actually used for a sample of size n; validates 2 <= m < n/2.
[[nodiscard]] std::size_t resolve_window(const BootstrapConfig& cfg, std::size_t n);

/// Validates replicate count and levels.
void validate(const BootstrapConfig& cfg);

/// Maps one vector of standard normal multipliers to one bootstrap statistic.
using ReplicateStatistic = std::function<double(std::span<const double>)>;

/// Replicate r draws `draws` multipliers from its own substream
/// derive_seed(seed, bootstrap, r), so the sample does not depend on thread
/// count or evaluation order. Returned unsorted, indexed by replicate.
[[nodiscard]] std::vector<double> run_replicates(std::size_t replicates, std::size_t draws, std::uint64_t seed,
                                                 const ReplicateStatistic& statistic,
                                                 Execution exec = Execution::parallel);

/// 1-based order-statistic index floor(B (1 - alpha)), at least 1.
[[nodiscard]] std::size_t order_index(std::size_t replicates, double alpha);

/// M_(floor(B(1-alpha))) from an ascending sample.
[[nodiscard]] double order_quantile(std::span<const double> sorted, double alpha);

/// 1 - B*/B with B* = #{r : M_(r) <= statistic}.
[[nodiscard]] double order_p_value(std::span<const double> sorted, double statistic);

}  // namespace secondchange
