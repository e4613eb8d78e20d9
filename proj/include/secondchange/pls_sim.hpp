#pragma once

#include "secondchange/time_series.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace secondchange {

/// The twelve simulation designs: six null/boundary models and four
/// lambda-indexed power designs (primed).
enum class ModelId { I, II, III, IV, V, VI, I_prime, II_prime, III_prime, IV_prime };

[[nodiscard]] std::string_view model_name(ModelId id);
/// Parses "I", "II", ..., "IV'" (also accepts "Ip", "IIp", ... for shells).
[[nodiscard]] ModelId parse_model(std::string_view name);

struct PlsModelSpec {
    ModelId model = ModelId::I;
    double lambda = 0.0;  // only used by the primed models
    bool include_mean = true;
    std::size_t ma_truncation = 100;
    std::size_t burn_in = 200;
};

/// Throws std::invalid_argument if lambda or truncation are out of range.
void validate(const PlsModelSpec& spec);

/// Trend used in every simulation design.
[[nodiscard]] double mean_function(double t) noexcept;

enum class FilterKind { autoregressive, moving_average };

/// Local description of the error filter at time t: e = scale * H where H is
/// an AR(1) recursion or a geometric MA(infinity) sum with the given coefficient.
struct LocalFilter {
    FilterKind kind;
    double coefficient;
    double scale;
};

[[nodiscard]] LocalFilter local_filter(const PlsModelSpec& spec, double t);

/// True if the design's variance function jumps (at t = 0.5).
[[nodiscard]] bool has_variance_break(const PlsModelSpec& spec);

/// Closed-form second-order structure of the local filter (evaluated at a
/// frozen t, so it is exact away from the break point).
struct SecondOrderOracle {
    std::function<double(double)> variance;
    std::function<double(double, std::size_t)> lag_correlation;
};

[[nodiscard]] SecondOrderOracle oracle(const PlsModelSpec& spec);

/// Y_i = mu(t_i) + e_i (or e_i alone) for i = 1..n, reproducible from `seed`.
[[nodiscard]] TimeSeries simulate(const PlsModelSpec& spec, std::size_t n, std::uint64_t seed);

}  // namespace secondchange
