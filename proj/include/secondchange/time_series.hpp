#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace secondchange {

/// Observations Y_1..Y_n on the implicit grid t_i = i/n. Storage is 0-based:
/// values()[i] holds Y_{i+1}.
class TimeSeries {
public:
    TimeSeries() = default;
    explicit TimeSeries(std::vector<double> values) : values_(std::move(values)) {}

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

    /// Grid point of the 0-based observation i, i.e. (i + 1) / n.
    [[nodiscard]] double grid(std::size_t i) const noexcept {
        return static_cast<double>(i + 1) / static_cast<double>(values_.size());
    }

private:
    std::vector<double> values_;
};

/// The grid t_i = i/n, i = 1..n.
[[nodiscard]] inline std::vector<double> unit_grid(std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i + 1) / static_cast<double>(n);
    return t;
}

/// Unbiased sample variance; 0 for fewer than two points.
[[nodiscard]] double sample_variance(std::span<const double> x);

}  // namespace secondchange
