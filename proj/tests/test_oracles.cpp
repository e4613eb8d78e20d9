// Library output against the brute-force reference computations in support/oracles.hpp.
// Deterministic inputs only.
#include "support/oracles.hpp"

#include "secondchange/bandwidth.hpp"
#include "secondchange/bootstrap.hpp"
#include "secondchange/cusum.hpp"
#include "secondchange/kernel.hpp"
#include "secondchange/pls_sim.hpp"
#include "secondchange/relevant.hpp"
#include "secondchange/smoothing.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace sc = secondchange;

namespace {

constexpr double kExact = 1e-10;
constexpr double kQuadrature = 1e-6;

sc::Residuals make_residuals(std::vector<double> e) {
    sc::Residuals r;
    r.e = std::move(e);
    r.series_variance = sc::sample_variance(r.e);
    return r;
}

std::vector<double> squares(const std::vector<double>& e) {
    std::vector<double> s;
    for (double v : e) s.push_back(v * v);
    return s;
}

std::vector<double> fixed_normals(std::size_t n, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> d;
    std::vector<double> out(n);
    for (double& v : out) v = d(gen);
    return out;
}

sc::VarianceFit unit_variance(std::size_t n) {
    sc::VarianceFit vf;
    vf.sigma2.assign(n, 1.0);
    return vf;
}

TEST(LocalLinearOracle, SevenPointExample) {
    const std::vector<double> y{1, 0, 2, 1, 3, 0, 1};
    const sc::MeanFit fit = sc::local_linear_fit(sc::TimeSeries(y), 0.5);
    const auto t = oracle::grid(7);
    const oracle::Line ref = oracle::weighted_ls(t, y, t[3], 0.5);
    EXPECT_NEAR(fit.mu_hat[3], ref.intercept, kExact);
    for (std::size_t i = 0; i < 7; ++i) {
        const oracle::Line r = oracle::weighted_ls(t, y, t[i], 0.5);
        EXPECT_NEAR(fit.mu_hat[i], r.intercept, kExact) << "i=" << i;
        EXPECT_NEAR(fit.mu_dot_hat[i], r.slope, kExact) << "i=" << i;
    }
}

TEST(LocalLinearOracle, RandomSeriesAllPoints) {
    const std::vector<double> y = fixed_normals(40, 3);
    const auto t = oracle::grid(40);
    for (double b : {0.08, 0.2, 0.45}) {
        const sc::MeanFit fit = sc::local_linear_fit(sc::TimeSeries(y), b);
        for (std::size_t i = 0; i < y.size(); ++i)
            EXPECT_NEAR(fit.mu_hat[i], oracle::weighted_ls(t, y, t[i], b).intercept, kExact);
    }
}

TEST(VarianceFitOracle, SmoothEightPoints) {
    const sc::Residuals res = make_residuals({0.3, -1.2, 0.8, 0.1, -0.5, 1.4, -0.9, 0.2});
    const sc::VarianceFit vf = sc::variance_fit_smooth(res, 0.5, 0.1);
    const auto t = oracle::grid(8);
    const auto sq = squares(res.e);
    for (std::size_t i = 0; i < 8; ++i)
        EXPECT_NEAR(vf.sigma2[i], std::max(oracle::weighted_ls(t, sq, t[i], 0.5).intercept, vf.floor), 1e-12);
}

TEST(VarianceFitOracle, PiecewiseSixteenPoints) {
    const sc::Residuals res = make_residuals(fixed_normals(16, 9));
    const sc::VarianceFit vf = sc::variance_fit_piecewise(res, std::size_t{8}, 0.5, 0.1);
    const auto t = oracle::grid(16);
    const auto sq = squares(res.e);
    const std::vector<double> t1(t.begin(), t.begin() + 8), t2(t.begin() + 8, t.end());
    const std::vector<double> y1(sq.begin(), sq.begin() + 8), y2(sq.begin() + 8, sq.end());
    for (std::size_t i = 0; i < 8; ++i) {
        EXPECT_NEAR(vf.sigma2[i], std::max(oracle::weighted_ls(t1, y1, t1[i], 0.5).intercept, vf.floor), 1e-12);
        EXPECT_NEAR(vf.sigma2[8 + i], std::max(oracle::weighted_ls(t2, y2, t2[i], 0.5).intercept, vf.floor), 1e-12);
    }
    ASSERT_TRUE(vf.break_location.has_value());
    EXPECT_DOUBLE_EQ(*vf.break_location, 0.5);
}

TEST(VarianceBreakOracle, NoiselessStep) {
    const std::size_t n = 200, L = 5;
    std::vector<double> e(n);
    for (std::size_t j = 0; j < n; ++j) e[j] = j < n / 2 ? 1.0 : std::sqrt(2.0);
    const sc::Residuals res = make_residuals(e);
    const sc::VarianceBreak vb = sc::variance_break_locate(res, L, 0.05);
    const auto sq = squares(e);
    EXPECT_EQ(vb.index, n / 2);
    EXPECT_EQ(vb.index, oracle::window_argmax(sq, L, 10));
    for (std::size_t i = 10; i <= n - 9; ++i)
        EXPECT_NEAR(sc::window_contrast(res, L, i), oracle::window_contrast(sq, L, i), kExact);
}

TEST(VarianceBreakOracle, RandomResidualsMatchEnumeration) {
    const auto e = fixed_normals(300, 21);
    const sc::Residuals res = make_residuals(e);
    const sc::VarianceBreak vb = sc::variance_break_locate(res, 6, 0.05);
    EXPECT_EQ(vb.index, oracle::window_argmax(squares(e), 6, 15));
}

TEST(CusumOracle, SquaredResidualExample) {
    const sc::Residuals res = make_residuals({1.0, std::sqrt(2.0), std::sqrt(3.0), 2.0});
    const sc::CusumSeries c = sc::cusum_series(std::vector<double>{1, 2, 3, 4});
    EXPECT_EQ(c.partial_sums, (std::vector<double>{1, 3, 6, 10}));
    EXPECT_EQ(c.drift, (std::vector<double>{-1.5, -2.0, -1.5, 0.0}));
    EXPECT_NEAR(sc::cusum_variance_statistic(res), 1.0, kExact);
    EXPECT_NEAR(sc::cusum_max_statistic(std::vector<double>{1, 2, 3, 4}), oracle::cusum_max({1, 2, 3, 4}), kExact);
}

TEST(CusumOracle, AlternatingSummands) {
    sc::WSequence w;
    w.w = {1, -1, 1, -1};
    EXPECT_NEAR(sc::cusum_correlation_statistic(w), 0.5, kExact);
    EXPECT_NEAR(sc::cusum_correlation_statistic(w), oracle::cusum_max(w.w), kExact);
}

TEST(CusumOracle, RandomSummands) {
    const auto x = fixed_normals(120, 4);
    EXPECT_NEAR(sc::cusum_max_statistic(x), oracle::cusum_max(x), kExact);
}

TEST(WSequenceOracle, TwelvePoints) {
    const auto e = fixed_normals(12, 5);
    const sc::Residuals res = make_residuals(e);
    sc::VarianceFit vf;
    vf.sigma2 = {0.5, 0.7, 0.9, 1.1, 1.3, 1.5, 1.7, 1.9, 2.1, 2.3, 2.5, 2.7};
    for (std::size_t k : {1u, 2u}) {
        const sc::WSequence w = sc::w_sequence(res, vf, k);
        for (std::size_t i = 0; i < 12; ++i) {
            const double next = i + k < 12 ? e[i + k] : 0.0;
            EXPECT_EQ(w.w[i], e[i] * next / vf.sigma2[i]);
        }
    }
}

TEST(BootstrapOracle, FivePointDoubleSum) {
    const std::vector<double> x{1, 0, 2, 1, 3};
    const std::vector<double> R{1, -1, 1, -1};
    const auto lib = sc::bootstrap_phi(x, 2, R);
    const auto ref = oracle::phi(x, 2, R);
    ASSERT_EQ(lib.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(lib[i], ref[i], kExact);
}

TEST(BootstrapOracle, MaxStatisticToy) {
    const auto x = fixed_normals(12, 6);
    const auto R = fixed_normals(10, 7);
    const auto p = oracle::phi(x, 3, R);
    EXPECT_NEAR(sc::bootstrap_max_statistic(sc::bootstrap_phi(x, 3, R), 3, 12), oracle::bootstrap_max(p, 3, 12),
                kExact);
}

TEST(BootstrapOracle, LongerSeries) {
    const auto x = squares(fixed_normals(90, 8));
    const auto R = fixed_normals(86, 10);
    const auto ref = oracle::phi(x, 5, R);
    const auto lib = sc::bootstrap_phi(x, 5, R);
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(lib[i], ref[i], kExact);
    EXPECT_NEAR(sc::bootstrap_max_statistic(lib, 5, 90), oracle::bootstrap_max(ref, 5, 90), kExact);
}

TEST(ChangePointOracle, NoiselessVarianceStep) {
    const std::size_t n = 100;
    std::vector<double> e(n);
    for (std::size_t j = 0; j < n; ++j) e[j] = j < n / 2 ? 1.0 : std::sqrt(2.0);
    const sc::ChangePointEstimate cp = sc::variance_cp_argmax(make_residuals(e));
    EXPECT_EQ(cp.index, n / 2);
    EXPECT_EQ(cp.index, oracle::cusum_argmax(squares(e)));
    EXPECT_DOUBLE_EQ(cp.fraction, 0.5);
}

TEST(ChangePointOracle, RandomSquaredResiduals) {
    const auto e = fixed_normals(150, 11);
    EXPECT_EQ(sc::variance_cp_argmax(make_residuals(e)).index, oracle::cusum_argmax(squares(e)));
}

TEST(ChangePointOracle, NoiselessCorrelationStep) {
    // products e_i e_{i+1} are -1 on the first half and +1 on the second
    const std::size_t n = 80;
    std::vector<double> e(n);
    for (std::size_t j = 0; j < n; ++j) e[j] = j < n / 2 ? (j % 2 ? -1.0 : 1.0) : 1.0;
    const sc::Residuals res = make_residuals(e);
    const sc::VarianceFit vf = unit_variance(n);
    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = j + 1 < n ? e[j] * e[j + 1] : 0.0;
    const sc::ChangePointEstimate cp = sc::correlation_cp_argmax(res, vf, 1);
    EXPECT_EQ(cp.index, oracle::cusum_argmax(w));
    EXPECT_NEAR(cp.fraction, 0.5, 1.0 / n);

    const sc::DeltaEstimate d = sc::correlation_delta(res, vf, cp, 1);
    EXPECT_NEAR(d.before, oracle::mean(w, 0, cp.index), kExact);
    EXPECT_NEAR(d.after, oracle::mean(w, cp.index, n), kExact);
}

TEST(DeltaOracle, TenPoints) {
    const auto e = fixed_normals(10, 12);
    const sc::Residuals res = make_residuals(e);
    sc::ChangePointEstimate cp;
    cp.index = 4;
    cp.fraction = 0.4;
    const sc::DeltaEstimate d = sc::variance_delta(res, cp);
    const auto sq = squares(e);
    EXPECT_NEAR(d.before, oracle::mean(sq, 0, 4), kExact);
    EXPECT_NEAR(d.after, oracle::mean(sq, 4, 10), kExact);
    EXPECT_EQ(d.delta, d.after - d.before);
}

TEST(RelevantStatisticOracle, NoiselessStepApproachesDeltaSquared) {
    // the step-function partial sums carry an O(1/n) bias, about 0.3% here
    const std::size_t n = 4000;
    const double delta = 0.75;
    std::vector<double> e(n);
    for (std::size_t j = 0; j < n; ++j) e[j] = j < n / 2 ? 1.0 : std::sqrt(1.0 + delta);
    const sc::Residuals res = make_residuals(e);
    const sc::ChangePointEstimate cp = sc::variance_cp_argmax(res);
    const double stat = sc::relevant_variance_statistic(res, cp);
    EXPECT_NEAR(stat, delta * delta, 0.01 * delta * delta);
    EXPECT_NEAR(stat, oracle::l2_cusum(squares(e), cp.fraction), kExact * stat);
}

TEST(RelevantStatisticOracle, CorrelationStepApproachesDeltaSquared) {
    const std::size_t n = 1000;
    std::vector<double> e(n);
    for (std::size_t j = 0; j < n; ++j) e[j] = j < n / 2 ? (j % 2 ? -1.0 : 1.0) : 1.0;
    const sc::Residuals res = make_residuals(e);
    const sc::VarianceFit vf = unit_variance(n);
    const sc::ChangePointEstimate cp = sc::correlation_cp_argmax(res, vf, 1);
    const double stat = sc::relevant_correlation_statistic(res, vf, cp, 1);
    EXPECT_NEAR(stat, 4.0, 0.04);  // jump from -1 to +1
    EXPECT_NEAR(stat, oracle::l2_cusum(sc::w_sequence(res, vf, 1).w, cp.fraction), kExact * stat);
}

TEST(RelevantStatisticOracle, RandomSummandsAndFractions) {
    const auto x = fixed_normals(77, 13);
    for (double t : {0.2, 0.5, 0.83})
        EXPECT_NEAR(sc::l2_cusum_statistic(x, t), oracle::l2_cusum(x, t), kExact);
}

TEST(RelevantBootstrapOracle, WeightsAtHalf) {
    const std::size_t n = 40;
    for (std::size_t i = 1; i <= n; ++i) {
        const double w = sc::relevant_weight(i, n, 0.5);
        if (2 * i <= n) EXPECT_NEAR(w, -static_cast<double>(i) / (2.0 * n), 1e-15);
        EXPECT_NEAR(w, oracle::relevant_weight(i, n, 0.5), 1e-15);
    }
    for (double t : {0.13, 0.71})
        for (std::size_t i = 1; i <= n; ++i) EXPECT_EQ(sc::relevant_weight(i, n, t), oracle::relevant_weight(i, n, t));
}

TEST(RelevantBootstrapOracle, TwelvePointsThreeWindow) {
    const std::size_t n = 12, m = 3;
    const auto x = squares(fixed_normals(n, 14));
    const auto R = fixed_normals(n - m + 1, 15);
    const std::size_t split = 6;
    const double delta_hat = 0.37, t = 0.5;

    std::vector<double> v(x);
    for (std::size_t j = 1; j <= n; ++j)
        if (j >= split) v[j - 1] -= delta_hat;
    const double ref = oracle::relevant_bootstrap(oracle::phi(v, m, R), m, n, t);

    const auto adjusted = sc::delta_adjusted(x, delta_hat, split);
    const double lib = sc::relevant_bootstrap_statistic(sc::bootstrap_phi(adjusted, m, R), m, n, t);
    EXPECT_NEAR(lib, ref, kExact);
}

TEST(PowerApproximationOracle, QuadratureNormalCdf) {
    const double delta = 0.1, change = 0.15, sd = 2.3, alpha = 0.05;
    const std::size_t n = 400;
    const double v = oracle::normal_quantile(1 - alpha, sd);
    const double arg = std::sqrt(static_cast<double>(n)) * (delta * delta - change * change) / change + v * delta / change;
    const double ref = 1.0 - oracle::normal_cdf(arg, sd);
    EXPECT_NEAR(sc::power_approximation(delta, change, n, sd, alpha), ref, kQuadrature);
}

TEST(GcvOracle, ThirtyPointHatMatrix) {
    const auto noise = fixed_normals(30, 16);
    std::vector<double> y(30);
    for (std::size_t i = 0; i < 30; ++i) y[i] = std::sin(6.0 * (i + 1) / 30.0) + 0.3 * noise[i];
    const sc::Kernel k;
    for (double b : {0.12, 0.2, 0.35}) {
        const double ref = oracle::gcv(y, b);
        EXPECT_NEAR(sc::gcv_score(y, b, k), ref, kExact * ref);
    }
}

TEST(MinimalVolatilityOracle, PlateauIsSelected) {
    const std::vector<double> grid = sc::default_mv_grid();
    const std::vector<double> path{5.0, 4.1, 3.3, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0, 3.1, 4.4};
    const sc::MvSelection sel = sc::mv_select_path(grid, path);
    std::size_t best = 0;
    double best_sd = 1e300;
    for (std::size_t i = 4; i <= 9; ++i) {
        double mean = 0, ss = 0;
        for (std::size_t j = i - 3; j <= i + 3; ++j) mean += path[j - 1] / 7.0;
        for (std::size_t j = i - 3; j <= i + 3; ++j) ss += (path[j - 1] - mean) * (path[j - 1] - mean);
        const double sd = std::sqrt(ss / 6.0);
        EXPECT_NEAR(sel.sd_profile[i - 4], sd, kExact);
        if (sd < best_sd) {
            best_sd = sd;
            best = i;
        }
    }
    EXPECT_EQ(sel.index, best);
    EXPECT_EQ(sel.index, 7u);
    EXPECT_DOUBLE_EQ(sel.bandwidth, grid[6]);
}

TEST(ModelOracle, ClosedFormSecondMoments) {
    sc::PlsModelSpec spec;
    spec.model = sc::ModelId::I;
    const sc::SecondOrderOracle o = sc::oracle(spec);
    EXPECT_NEAR(o.lag_correlation(0.3, 1), 0.5, 1e-15);
    EXPECT_NEAR(o.variance(0.8), (1.0 / 16.0) / (1.0 - 0.25), 1e-15);
    EXPECT_NEAR(o.variance(0.8), 1.0 / 12.0, 1e-15);

    spec.model = sc::ModelId::II;
    const sc::SecondOrderOracle o2 = sc::oracle(spec);
    for (double t : {0.1, 0.5, 0.9}) EXPECT_NEAR(o2.variance(t), 1.0 / 16.0, 1e-10);
}

TEST(KernelOracle, MomentsThroughQuadrature) {
    const sc::Kernel k;
    EXPECT_NEAR(k.mu(0), 1.0, kQuadrature);
    EXPECT_NEAR(k.mu(1), 0.0, kQuadrature);
    EXPECT_NEAR(k.mu(2), 0.2, kQuadrature);
    EXPECT_NEAR(k.phi(0), 0.6, kQuadrature);
}

}  // namespace
