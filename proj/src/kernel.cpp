#include "secondchange/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace secondchange {

std::string_view kernel_name(KernelId id) {
    switch (id) {
        case KernelId::epanechnikov: return "epanechnikov";
        case KernelId::biweight: return "biweight";
        case KernelId::triweight: return "triweight";
    }
    return "?";
}

KernelId parse_kernel(std::string_view name) {
    for (KernelId id : {KernelId::epanechnikov, KernelId::biweight, KernelId::triweight}) {
        if (kernel_name(id) == name) return id;
    }
    throw std::invalid_argument("unknown kernel '" + std::string(name) + "'");
}

QuadratureRule gauss_legendre(std::size_t points) {
    if (points == 0) throw std::invalid_argument("quadrature needs at least one point");
    QuadratureRule rule;
    rule.nodes.resize(points);
    rule.weights.resize(points);
    const std::size_t half = (points + 1) / 2;
    const double n = static_cast<double>(points);
    for (std::size_t i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= points; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            if (points == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= points; ++k) {
            const double kk = static_cast<double>(k);
            const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[points - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[points - 1 - i] = w;
    }
    if (points % 2 == 1) rule.nodes[points / 2] = 0.0;
    return rule;
}

namespace {

const QuadratureRule& cached_rule() {
    static const QuadratureRule rule = gauss_legendre(Kernel::kQuadraturePoints);
    return rule;
}

double integrate(double lo, double hi, auto&& f) {
    if (!(hi > lo)) return 0.0;
    const QuadratureRule& rule = cached_rule();
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

}  // namespace

Kernel::Kernel(KernelId id) : id_(id) {
    for (std::size_t l = 0; l < kCachedMoments; ++l) {
        const double p = static_cast<double>(l);
        mu_[l] = integrate(-1.0, 1.0, [&](double x) { return std::pow(x, p) * (*this)(x); });
        phi_[l] = integrate(-1.0, 1.0, [&](double x) {
            const double k = (*this)(x);
            return std::pow(x, p) * k * k;
        });
    }
}

double Kernel::operator()(double x) const noexcept {
    const double u = 1.0 - x * x;
    if (!(u > 0.0)) return 0.0;
    switch (id_) {
        case KernelId::epanechnikov: return 0.75 * u;
        case KernelId::biweight: return 15.0 / 16.0 * u * u;
        case KernelId::triweight: return 35.0 / 32.0 * u * u * u;
    }
    return 0.0;
}

double Kernel::mu(std::size_t l) const {
    if (l >= kCachedMoments) throw std::out_of_range("kernel moment order too large");
    return mu_[l];
}

double Kernel::phi(std::size_t l) const {
    if (l >= kCachedMoments) throw std::out_of_range("kernel moment order too large");
    return phi_[l];
}

double Kernel::boundary_moment(std::size_t j, double t, double b) const {
    if (!(b > 0.0)) throw std::invalid_argument("bandwidth must be positive");
    const double lo = std::max(-1.0, -t / b);
    const double hi = std::min(1.0, (1.0 - t) / b);
    const double p = static_cast<double>(j);
    return integrate(lo, hi, [&](double x) { return std::pow(x, p) * (*this)(x); });
}

}  // namespace secondchange
