#include "secondchange/pls_sim.hpp"

#include "secondchange/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace secondchange {

namespace {

constexpr double kBreak = 0.5;

double a_coef(double t) { return 0.25 + t / 2.0; }
double b_coef(double t) { return 0.5 - (t - 0.5) * (t - 0.5); }
double bump(double t) { return 1.0 - (t - 0.5) * (t - 0.5); }

bool is_ar(ModelId id) {
    switch (id) {
        case ModelId::II:
        case ModelId::III:
        case ModelId::II_prime:
            return false;
        default:
            return true;
    }
}

}  // namespace

std::string_view model_name(ModelId id) {
    switch (id) {
        case ModelId::I: return "I";
        case ModelId::II: return "II";
        case ModelId::III: return "III";
        case ModelId::IV: return "IV";
        case ModelId::V: return "V";
        case ModelId::VI: return "VI";
        case ModelId::I_prime: return "I'";
        case ModelId::II_prime: return "II'";
        case ModelId::III_prime: return "III'";
        case ModelId::IV_prime: return "IV'";
    }
    return "?";
}

ModelId parse_model(std::string_view name) {
    std::string key(name);
    if (!key.empty() && (key.back() == 'p' || key.back() == 'P')) key.back() = '\'';
    for (ModelId id : {ModelId::I, ModelId::II, ModelId::III, ModelId::IV, ModelId::V, ModelId::VI,
                       ModelId::I_prime, ModelId::II_prime, ModelId::III_prime, ModelId::IV_prime}) {
        if (model_name(id) == key) return id;
    }
    throw std::invalid_argument("unknown model id '" + std::string(name) + "'");
}

double mean_function(double t) noexcept { return 8.0 * (-(t - 0.5) * (t - 0.5) + 0.25); }

void validate(const PlsModelSpec& spec) {
    if (spec.ma_truncation < 1) throw std::invalid_argument("ma_truncation must be at least 1");
    const double l = spec.lambda;
    if (!std::isfinite(l)) throw std::invalid_argument("lambda must be finite");
    switch (spec.model) {
        case ModelId::I_prime:
            if (!(l > -1.0)) throw std::invalid_argument("model I' requires lambda > -1");
            break;
        case ModelId::II_prime:
            if (!(l > -2.0)) throw std::invalid_argument("model II' requires lambda > -2");
            break;
        case ModelId::III_prime:
            if (!(std::abs(0.3 - l) < 1.0))
                throw std::invalid_argument("model III' requires |0.3 - lambda| < 1");
            break;
        case ModelId::IV_prime:
            if (!(std::abs(0.5 - l) < 1.0))
                throw std::invalid_argument("model IV' requires |0.5 - lambda| < 1");
            break;
        default:
            break;
    }
}

LocalFilter local_filter(const PlsModelSpec& spec, double t) {
    const bool before = t <= kBreak;
    const double l = spec.lambda;
    switch (spec.model) {
        case ModelId::I:
            return {FilterKind::autoregressive, before ? 0.5 : -0.5, 0.25};
        case ModelId::I_prime:
            return {FilterKind::autoregressive, before ? 0.5 : -0.5,
                    before ? 0.25 : std::sqrt(1.0 + l) / 4.0};
        case ModelId::II: {
            const double a = a_coef(t);
            return {FilterKind::moving_average, a, std::sqrt(1.0 - a * a) / 4.0};
        }
        case ModelId::III:
        case ModelId::II_prime: {
            if (before) {
                const double a = a_coef(t);
                return {FilterKind::moving_average, a, std::sqrt(1.0 - a * a) / 8.0};
            }
            const double b = b_coef(t);
            const double level = spec.model == ModelId::III ? 2.0 : 2.0 + l;
            return {FilterKind::moving_average, b, std::sqrt(level * (1.0 - b * b)) / 8.0};
        }
        case ModelId::IV:
            return {FilterKind::autoregressive, 0.3, std::sqrt(bump(t)) / 4.0};
        case ModelId::V:
            return {FilterKind::autoregressive, 0.3,
                    std::sqrt(before ? bump(t) : 1.0 - 0.5 * std::sin(t)) / 4.0};
        case ModelId::VI:
            return {FilterKind::autoregressive, before ? 0.5 : 0.7, std::sqrt(bump(t)) / 8.0};
        case ModelId::III_prime:
            return {FilterKind::autoregressive, before ? 0.3 : 0.3 - l, std::sqrt(bump(t)) / 4.0};
        case ModelId::IV_prime:
            return {FilterKind::autoregressive, before ? 0.5 - l : 0.7, std::sqrt(bump(t)) / 8.0};
    }
    throw std::logic_error("unhandled model");
}

bool has_variance_break(const PlsModelSpec& spec) {
    switch (spec.model) {
        case ModelId::III:
        case ModelId::V:
        case ModelId::VI:
        case ModelId::IV_prime:
            return true;
        case ModelId::I_prime:
            return spec.lambda != 0.0;
        case ModelId::II_prime:
            return spec.lambda != -1.0;
        case ModelId::III_prime:
            return spec.lambda != 0.0 && std::abs(0.3 - spec.lambda) != 0.3;
        default:
            return false;
    }
}

SecondOrderOracle oracle(const PlsModelSpec& spec) {
    validate(spec);
    const std::size_t terms = spec.ma_truncation;
    SecondOrderOracle out;
    out.variance = [spec, terms](double t) {
        const LocalFilter f = local_filter(spec, t);
        const double c2 = f.coefficient * f.coefficient;
        if (f.kind == FilterKind::autoregressive) return f.scale * f.scale / (1.0 - c2);
        // truncated geometric series sum_{j<terms} c^{2j}
        double sum = 0.0, p = 1.0;
        for (std::size_t j = 0; j < terms; ++j, p *= c2) sum += p;
        return f.scale * f.scale * sum;
    };
    out.lag_correlation = [spec, terms](double t, std::size_t k) {
        if (k == 0) return 1.0;
        const LocalFilter f = local_filter(spec, t);
        const double c = f.coefficient;
        if (f.kind == FilterKind::autoregressive) return std::pow(c, static_cast<double>(k));
        if (k >= terms) return 0.0;
        double cov = 0.0, var = 0.0, p = 1.0;
        for (std::size_t j = 0; j < terms; ++j, p *= c * c) {
            var += p;
            if (j + k < terms) cov += p;
        }
        return std::pow(c, static_cast<double>(k)) * cov / var;
    };
    return out;
}

TimeSeries simulate(const PlsModelSpec& spec, std::size_t n, std::uint64_t seed) {
    validate(spec);
    if (n < 8) throw std::invalid_argument("simulate requires n >= 8");

    const bool ar = is_ar(spec.model);
    const std::size_t history = ar ? spec.burn_in : spec.ma_truncation - 1;

    // innovations[history + i - 1] holds eps_i, so eps_{1-history}..eps_n.
    std::vector<double> eps(history + n);
    NormalStream forward(derive_seed(seed, Stream::innovations_forward));
    for (std::size_t i = 0; i < n; ++i) eps[history + i] = forward.next();
    NormalStream backward(derive_seed(seed, Stream::innovations_backward));
    for (std::size_t j = 0; j < history; ++j) eps[history - 1 - j] = backward.next();

    const double dn = static_cast<double>(n);
    std::vector<double> y(n);
    if (ar) {
        const double phi0 = local_filter(spec, 1.0 / dn).coefficient;
        double h = 0.0;
        for (std::size_t j = 0; j < history; ++j) h = phi0 * h + eps[j];
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i + 1) / dn;
            const LocalFilter f = local_filter(spec, t);
            h = f.coefficient * h + eps[history + i];
            y[i] = f.scale * h;
        }
    } else {
        const std::size_t terms = spec.ma_truncation;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i + 1) / dn;
            const LocalFilter f = local_filter(spec, t);
            double sum = 0.0, p = 1.0;
            const std::size_t pos = history + i;
            for (std::size_t j = 0; j < terms; ++j, p *= f.coefficient) sum += p * eps[pos - j];
            y[i] = f.scale * sum;
        }
    }
    if (spec.include_mean) {
        for (std::size_t i = 0; i < n; ++i) y[i] += mean_function(static_cast<double>(i + 1) / dn);
    }
    return TimeSeries(std::move(y));
}

}  // namespace secondchange
