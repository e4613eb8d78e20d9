#pragma once
// Brute-force reference computations. Nothing here calls into the library;
// every quantity is rebuilt from its defining formula, usually the slow way.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

inline double epanechnikov(double x) { return std::abs(x) <= 1.0 ? 0.75 * (1.0 - x * x) : 0.0; }

inline std::vector<double> grid(std::size_t n) {
    std::vector<double> t;
    for (std::size_t i = 1; i <= n; ++i) t.push_back(static_cast<double>(i) / static_cast<double>(n));
    return t;
}

struct Line {
    double intercept;
    double slope;
};

/// argmin over (b0, b1) of sum_j K((t_j - t0)/b) (y_j - b0 - b1 (t_j - t0))^2, by the
/// 2x2 normal equations written out with explicit weights and Cramer's rule.
inline Line weighted_ls(const std::vector<double>& t, const std::vector<double>& y, double t0, double b,
                        const std::function<double(double)>& K = epanechnikov) {
    double a11 = 0, a12 = 0, a22 = 0, c1 = 0, c2 = 0;
    for (std::size_t j = 0; j < t.size(); ++j) {
        const double w = K((t[j] - t0) / b);
        const double x = t[j] - t0;
        a11 += w;
        a12 += w * x;
        a22 += w * x * x;
        c1 += w * y[j];
        c2 += w * x * y[j];
    }
    const double det = a11 * a22 - a12 * a12;
    return {(c1 * a22 - a12 * c2) / det, (a11 * c2 - a12 * c1) / det};
}

/// Full smoother matrix: column j is the fit to the j-th unit vector.
inline std::vector<std::vector<double>> hat_matrix(std::size_t n, double b) {
    const auto t = grid(n);
    std::vector<std::vector<double>> H(n, std::vector<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        for (std::size_t i = 0; i < n; ++i) H[i][j] = weighted_ls(t, e, t[i], b).intercept;
    }
    return H;
}

inline double gcv(const std::vector<double>& y, double b) {
    const std::size_t n = y.size();
    const auto H = hat_matrix(n, b);
    double rss = 0, tr = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double fit = 0;
        for (std::size_t j = 0; j < n; ++j) fit += H[i][j] * y[j];
        rss += (y[i] - fit) * (y[i] - fit);
        tr += H[i][i];
    }
    const double d = 1.0 - tr / static_cast<double>(n);
    return rss / static_cast<double>(n) / (d * d);
}

/// max_i |S_i - (i/n) S_n| / sqrt(n), each partial sum recomputed from scratch.
inline double cusum_max(const std::vector<double>& x) {
    const std::size_t n = x.size();
    double total = 0;
    for (double v : x) total += v;
    double best = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < i; ++j) s += x[j];
        best = std::max(best, std::abs(s - static_cast<double>(i) / static_cast<double>(n) * total));
    }
    return best / std::sqrt(static_cast<double>(n));
}

/// Smallest m maximising (S_m - (m/n) S_n)^2.
inline std::size_t cusum_argmax(const std::vector<double>& x) {
    const std::size_t n = x.size();
    double total = 0;
    for (double v : x) total += v;
    std::size_t arg = 1;
    double best = -1;
    for (std::size_t m = 1; m <= n; ++m) {
        double s = 0;
        for (std::size_t j = 0; j < m; ++j) s += x[j];
        const double d = s - static_cast<double>(m) / static_cast<double>(n) * total;
        if (d * d > best) {
            best = d * d;
            arg = m;
        }
    }
    return arg;
}

/// Phi_i = (m (n-m+1))^{-1/2} sum_{j<=i} (sum_{r=j}^{j+m-1} x_r - (m/n) S_n) R_j, i = 1..n-m+1.
inline std::vector<double> phi(const std::vector<double>& x, std::size_t m, const std::vector<double>& R) {
    const std::size_t n = x.size();
    const std::size_t len = n - m + 1;
    double total = 0;
    for (double v : x) total += v;
    const double scale = 1.0 / std::sqrt(static_cast<double>(m) * static_cast<double>(len));
    std::vector<double> out(len);
    for (std::size_t i = 1; i <= len; ++i) {
        double acc = 0;
        for (std::size_t j = 1; j <= i; ++j) {
            double block = 0;
            for (std::size_t r = j; r <= j + m - 1; ++r) block += x[r - 1];
            acc += (block - static_cast<double>(m) / static_cast<double>(n) * total) * R[j - 1];
        }
        out[i - 1] = scale * acc;
    }
    return out;
}

/// max_{m+1 <= i <= n-m+1} |Phi_i - (i/(n-m+1)) Phi_{n-m+1}|.
inline double bootstrap_max(const std::vector<double>& p, std::size_t m, std::size_t n) {
    const std::size_t len = n - m + 1;
    double best = 0;
    for (std::size_t i = m + 1; i <= len; ++i)
        best = std::max(best, std::abs(p[i - 1] - static_cast<double>(i) / static_cast<double>(len) * p[len - 1]));
    return best;
}

inline double relevant_weight(std::size_t i, std::size_t n, double t) {
    const double s = static_cast<double>(i) / static_cast<double>(n);
    return s * t - std::min(s, t);
}

/// (1/n) (6/(t^2(1-t)^2)) sum_{i=m+1}^{n-m+1} (Phi_i - i/(n-m+1) Phi_end) w_i.
inline double relevant_bootstrap(const std::vector<double>& p, std::size_t m, std::size_t n, double t) {
    const std::size_t len = n - m + 1;
    double acc = 0;
    for (std::size_t i = m + 1; i <= len; ++i)
        acc += (p[i - 1] - static_cast<double>(i) / static_cast<double>(len) * p[len - 1]) * relevant_weight(i, n, t);
    return acc * 6.0 / (t * t * (1 - t) * (1 - t)) / static_cast<double>(n);
}

/// 3/(t^2(1-t)^2) * integral of U(s)^2 over [0,1], U(s) = (1/n) sum_{j<=floor(ns)} x_j - (s/n) S_n.
/// Simpson's rule on every cell [j/n, (j+1)/n); U is affine on each cell so this is exact
/// up to rounding, but it shares no code with the closed-form cell integral.
inline double l2_cusum(const std::vector<double>& x, double t) {
    const std::size_t n = x.size();
    const double nn = static_cast<double>(n);
    double total = 0;
    for (double v : x) total += v;
    double integral = 0;
    double partial = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j > 0) partial += x[j - 1];
        const double a = static_cast<double>(j) / nn, c = static_cast<double>(j + 1) / nn;
        auto U = [&](double s) { return partial / nn - s / nn * total; };
        const double mid = 0.5 * (a + c);
        integral += (c - a) / 6.0 * (U(a) * U(a) + 4 * U(mid) * U(mid) + U(c) * U(c));
    }
    return 3.0 / (t * t * (1 - t) * (1 - t)) * integral;
}

/// Standard normal CDF by composite Simpson quadrature of the density from -12.
inline double normal_cdf(double x, double sd = 1.0) {
    const double z = x / sd;
    if (z < -12) return 0.0;
    const std::size_t cells = 20000;
    const double a = -12.0, h = (z - a) / static_cast<double>(cells);
    auto f = [](double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI); };
    double acc = f(a) + f(z);
    for (std::size_t k = 1; k < cells; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(k));
    return acc * h / 3.0;
}

inline double normal_quantile(double p, double sd = 1.0) {
    double lo = -12 * sd, hi = 12 * sd;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (normal_cdf(mid, sd) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// M(i) = (1/L)(sum_{j=i-L+1}^{i} x_j - sum_{j=i}^{i+L-1} x_j), x = squared residuals.
inline double window_contrast(const std::vector<double>& sq, std::size_t L, std::size_t i) {
    double left = 0, right = 0;
    for (std::size_t j = i - L + 1; j <= i; ++j) left += sq[j - 1];
    for (std::size_t j = i; j <= i + L - 1; ++j) right += sq[j - 1];
    return (left - right) / static_cast<double>(L);
}

inline std::size_t window_argmax(const std::vector<double>& sq, std::size_t L, std::size_t trim) {
    const std::size_t n = sq.size();
    std::size_t arg = trim;
    double best = -1;
    for (std::size_t i = trim; i <= n - trim + 1; ++i) {
        const double v = std::abs(window_contrast(sq, L, i));
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    return arg;
}

inline double mean(const std::vector<double>& x, std::size_t from, std::size_t to) {  // [from, to)
    double s = 0;
    for (std::size_t j = from; j < to; ++j) s += x[j];
    return s / static_cast<double>(to - from);
}

}  // namespace oracle
