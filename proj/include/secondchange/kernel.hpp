#pragma once

#include <array>
#include <string_view>
#include <vector>

namespace secondchange {

enum class KernelId { epanechnikov, biweight, triweight };

[[nodiscard]] std::string_view kernel_name(KernelId id);
[[nodiscard]] KernelId parse_kernel(std::string_view name);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n).
[[nodiscard]] QuadratureRule gauss_legendre(std::size_t points);

/// Symmetric polynomial kernel with support [-1, 1] and unit mass.
///
/// Moments mu_l = int x^l K(x) dx and phi_l = int x^l K(x)^2 dx are cached for
/// l = 0..4 at construction using a 201-point Gauss-Legendre rule (exact for
/// these polynomial integrands).
class Kernel {
public:
    static constexpr std::size_t kCachedMoments = 5;
    static constexpr std::size_t kQuadraturePoints = 201;

    explicit Kernel(KernelId id = KernelId::epanechnikov);

    [[nodiscard]] KernelId id() const noexcept { return id_; }
    [[nodiscard]] std::string_view name() const { return kernel_name(id_); }

    /// K(x); zero outside (-1, 1).
    [[nodiscard]] double operator()(double x) const noexcept;

    [[nodiscard]] double mu(std::size_t l) const;
    [[nodiscard]] double phi(std::size_t l) const;

    /// nu_{j,b}(t) = int_{-t/b}^{(1-t)/b} x^j K(x) dx, the truncated moment seen
    /// by a smoother with bandwidth b at position t of the unit interval.
    [[nodiscard]] double boundary_moment(std::size_t j, double t, double b) const;

private:
    KernelId id_;
    std::array<double, kCachedMoments> mu_{};
    std::array<double, kCachedMoments> phi_{};
};

}  // namespace secondchange
