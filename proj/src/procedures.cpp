#include "secondchange/procedures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace secondchange {

std::string_view bandwidth_source_name(BandwidthChoice::Kind kind) {
    switch (kind) {
        case BandwidthChoice::Kind::fixed: return "fixed";
        case BandwidthChoice::Kind::mv: return "mv";
        case BandwidthChoice::Kind::gcv: return "gcv";
    }
    throw std::invalid_argument("unknown bandwidth source");
}

std::string_view test_kind_name(TestKind kind) {
    switch (kind) {
        case TestKind::variance: return "variance";
        case TestKind::correlation: return "correlation";
        case TestKind::relevant_variance: return "relevant-variance";
        case TestKind::relevant_correlation: return "relevant-correlation";
    }
    throw std::invalid_argument("unknown test kind");
}

bool TestReport::rejects(double alpha) const {
    for (const auto& level : levels)
        if (std::abs(level.alpha - alpha) < 1e-12) return level.reject;
    throw std::invalid_argument("level not evaluated by this report");
}

LocatorParams resolve_locator(const TestOptions& options, std::size_t n) {
    LocatorParams p;
    p.L = options.locator_L.value_or(cube_root_floor(n));
    if (p.L == 0) throw std::invalid_argument("locator window L must be positive");
    if (options.locator_zeta) {
        p.zeta = *options.locator_zeta;
    } else {
        // the guard band must hold at least one full window
        p.zeta = std::max(0.016, static_cast<double>(p.L) / static_cast<double>(n));
    }
    return p;
}

namespace {

struct Stage {
    Kernel kernel;
    MeanFit mean;
    Residuals res;
    BandwidthChoice::Kind mean_source = BandwidthChoice::Kind::fixed;
};

void check_series(const TimeSeries& series) {
    if (series.size() < 20) throw std::invalid_argument("series needs at least 20 observations");
    for (double v : series.values())
        if (!std::isfinite(v)) throw std::invalid_argument("series contains a non-finite value");
}

double pick_variance_bandwidth(const Residuals& res, const TestOptions& opt, const Kernel& kernel) {
    switch (opt.variance_bandwidth.kind) {
        case BandwidthChoice::Kind::fixed: return opt.variance_bandwidth.value;
        case BandwidthChoice::Kind::gcv: return gcv_select_variance(res, kernel, opt.bootstrap.exec).bandwidth;
        case BandwidthChoice::Kind::mv: break;
    }
    throw std::invalid_argument("minimal volatility is not available for the variance bandwidth");
}

VarianceFit fit_variance(const Residuals& res, VarianceVariant variant, double c, double b,
                         const TestOptions& opt, const Kernel& kernel, std::optional<VarianceBreak>* brk) {
    if (variant == VarianceVariant::smooth) return variance_fit_smooth(res, c, b, kernel, opt.bootstrap.exec);
    const LocatorParams lp = resolve_locator(opt, res.size());
    const VarianceBreak vb = variance_break_locate(res, lp.L, lp.zeta);
    if (brk) *brk = vb;
    return variance_fit_piecewise(res, vb.index, c, b, kernel, opt.bootstrap.exec);
}

// Mean bandwidth: fixed, GCV on the series, or MV over the path of the test statistic.
Stage mean_stage(const TimeSeries& series, const TestOptions& opt, BandwidthChoice fallback,
                 const std::function<double(const Residuals&)>& statistic) {
    Stage s{Kernel(opt.kernel), {}, {}, {}};
    const BandwidthChoice choice = opt.mean_bandwidth.value_or(fallback);
    s.mean_source = choice.kind;
    double b = choice.value;
    if (choice.kind == BandwidthChoice::Kind::gcv) {
        b = gcv_select(series, s.kernel, opt.bootstrap.exec).bandwidth;
    } else if (choice.kind == BandwidthChoice::Kind::mv) {
        b = mv_select(opt.mv_grid,
                      [&](double cand) {
                          try {
                              const MeanFit f = local_linear_fit(series, cand, s.kernel, opt.bootstrap.exec);
                              return statistic(residuals(series, f));
                          } catch (const std::exception&) {
                              return std::numeric_limits<double>::quiet_NaN();
                          }
                      })
                .bandwidth;
    }
    s.mean = local_linear_fit(series, b, s.kernel, opt.bootstrap.exec);
    s.res = residuals(series, s.mean);
    return s;
}

void fill_tuning(TestReport& rep, const Stage& s, const TestOptions& opt, std::size_t m) {
    rep.tuning.kernel = opt.kernel;
    rep.tuning.mean_bandwidth = s.mean.bandwidth;
    rep.tuning.mean_bandwidth_source = s.mean_source;
    rep.tuning.window_m = m;
    rep.tuning.replicates = opt.bootstrap.replicates;
    rep.tuning.seed = opt.bootstrap.seed;
}

void summarise_sample(TestReport& rep, std::vector<double> sample) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    rep.bootstrap_mean = std::accumulate(sample.begin(), sample.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : sample) ss += (v - rep.bootstrap_mean) * (v - rep.bootstrap_mean);
    rep.bootstrap_sd = sample.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    rep.bootstrap_sorted = std::move(sample);
}

void classical_levels(TestReport& rep, const std::vector<double>& alphas) {
    for (double a : alphas) {
        const double q = order_quantile(rep.bootstrap_sorted, a);
        rep.levels.push_back({a, q, q, rep.statistic > q});
    }
    rep.p_value = order_p_value(rep.bootstrap_sorted, rep.statistic);
}

std::vector<LevelResult> relevant_levels(const std::vector<double>& sorted, double statistic, double delta,
                                         std::size_t n, std::span<const double> alphas) {
    std::vector<LevelResult> out;
    for (double a : alphas) {
        const double q = order_quantile(sorted, a);
        const double thr = relevant_threshold(delta, q, n);
        out.push_back({a, q, thr, statistic > thr});
    }
    return out;
}

std::vector<double> replicate_max(std::span<const double> values, std::size_t m, const BootstrapConfig& cfg) {
    const std::size_t n = values.size();
    const std::vector<double> dev = block_deviations(values, m);
    return run_replicates(
        cfg.replicates, dev.size(), cfg.seed,
        [&](std::span<const double> R) {
            std::vector<double> phi(dev.size());
            phi_from_deviations(dev, m, R, phi);
            return bootstrap_max_statistic(phi, m, n);
        },
        cfg.exec);
}

std::vector<double> squares(const Residuals& res) {
    std::vector<double> out(res.size());
    for (std::size_t i = 0; i < res.size(); ++i) out[i] = res.e[i] * res.e[i];
    return out;
}

// fraction 1/n is admissible; only t = 1 leaves the L2 normalisation undefined
void guard_interior(const ChangePointEstimate& cp, std::size_t n) {
    if (cp.index < 1 || cp.index >= n)
        throw std::runtime_error("change-point estimate lies at the sample end (t = 1)");
}

void check_delta(double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("delta must be positive");
}

// Correlation pipelines share everything up to the W sequence.
struct CorrelationStage {
    Stage base;
    double c = 0.0;
    BandwidthChoice::Kind c_source = BandwidthChoice::Kind::fixed;
    VarianceFit var;
    std::optional<VarianceBreak> brk;
};

CorrelationStage correlation_stage(const TimeSeries& series, std::size_t k, VarianceVariant variant,
                                   const TestOptions& opt,
                                   const std::function<double(const Residuals&, const VarianceFit&)>& statistic) {
    CorrelationStage cs;
    const Kernel kernel(opt.kernel);
    auto after_mean = [&](const Residuals& res, double b, std::optional<VarianceBreak>* brk) {
        const double c = pick_variance_bandwidth(res, opt, kernel);
        return fit_variance(res, variant, c, b, opt, kernel, brk);
    };
    cs.base = mean_stage(series, opt, BandwidthChoice::gcv(), [&](const Residuals& res) {
        // c is re-selected for every candidate b
        const VarianceFit vf = after_mean(res, 0.0, nullptr);
        return statistic(res, vf);
    });
    cs.var = after_mean(cs.base.res, cs.base.mean.bandwidth, &cs.brk);
    cs.c = cs.var.c;
    cs.c_source = opt.variance_bandwidth.kind;
    (void)k;
    return cs;
}

void fill_correlation_tuning(TestReport& rep, const CorrelationStage& cs, const TestOptions& opt, std::size_t k,
                             VarianceVariant variant) {
    rep.tuning.variance_bandwidth = cs.c;
    rep.tuning.variance_bandwidth_source = cs.c_source;
    rep.tuning.lag = k;
    rep.tuning.variance_variant = variant;
    if (variant == VarianceVariant::piecewise) {
        const LocatorParams lp = resolve_locator(opt, rep.n);
        rep.tuning.locator_L = lp.L;
        rep.tuning.locator_zeta = lp.zeta;
    }
    rep.variance_break = cs.brk;
    rep.variance_floor_applied = cs.var.floor_applied;
}

}  // namespace

TestReport classical_variance_test(const TimeSeries& series, const TestOptions& options) {
    check_series(series);
    validate(options.bootstrap);
    const std::size_t n = series.size();
    const std::size_t m = resolve_window(options.bootstrap, n);

    const Stage s = mean_stage(series, options, BandwidthChoice::mv(),
                               [](const Residuals& r) { return cusum_variance_statistic(r); });
    TestReport rep;
    rep.kind = TestKind::variance;
    rep.n = n;
    rep.statistic = cusum_variance_statistic(s.res);
    fill_tuning(rep, s, options, m);
    summarise_sample(rep, replicate_max(squares(s.res), m, options.bootstrap));
    classical_levels(rep, options.bootstrap.alphas);
    return rep;
}

TestReport classical_correlation_test(const TimeSeries& series, std::size_t k, VarianceVariant variant,
                                      const TestOptions& options) {
    check_series(series);
    validate(options.bootstrap);
    const std::size_t n = series.size();
    const std::size_t m = resolve_window(options.bootstrap, n);

    const CorrelationStage cs =
        correlation_stage(series, k, variant, options, [k](const Residuals& r, const VarianceFit& vf) {
            return cusum_correlation_statistic(w_sequence(r, vf, k));
        });
    const WSequence w = w_sequence(cs.base.res, cs.var, k);
    TestReport rep;
    rep.kind = TestKind::correlation;
    rep.n = n;
    rep.statistic = cusum_correlation_statistic(w);
    fill_tuning(rep, cs.base, options, m);
    fill_correlation_tuning(rep, cs, options, k, variant);
    summarise_sample(rep, replicate_max(w.w, m, options.bootstrap));
    classical_levels(rep, options.bootstrap.alphas);
    return rep;
}

RelevantTestReport relevant_variance_test(const TimeSeries& series, double delta, const TestOptions& options) {
    check_series(series);
    check_delta(delta);
    validate(options.bootstrap);
    const std::size_t n = series.size();
    const std::size_t m = resolve_window(options.bootstrap, n);

    const Stage s = mean_stage(series, options, BandwidthChoice::mv(), [n](const Residuals& r) {
        const ChangePointEstimate cp = variance_cp_argmax(r);
        guard_interior(cp, n);
        return relevant_variance_statistic(r, cp);
    });
    RelevantTestReport rep;
    rep.kind = TestKind::relevant_variance;
    rep.n = n;
    rep.delta_threshold = delta;
    rep.change_point = variance_cp_argmax(s.res);
    guard_interior(rep.change_point, n);
    rep.delta_estimate = variance_delta(s.res, rep.change_point);
    rep.statistic = relevant_variance_statistic(s.res, rep.change_point);
    fill_tuning(rep, s, options, m);
    summarise_sample(rep,
                     relevant_variance_bootstrap(s.res, rep.change_point, rep.delta_estimate, m, options.bootstrap));
    rep.levels = relevant_levels(rep.bootstrap_sorted, rep.statistic, delta, n, options.bootstrap.alphas);
    rep.p_value = relevant_p_value(rep.bootstrap_sorted, rep.statistic, delta, n);
    return rep;
}

RelevantTestReport relevant_correlation_test(const TimeSeries& series, std::size_t k, double delta,
                                             VarianceVariant variant, const TestOptions& options) {
    check_series(series);
    check_delta(delta);
    validate(options.bootstrap);
    const std::size_t n = series.size();
    const std::size_t m = resolve_window(options.bootstrap, n);

    const CorrelationStage cs =
        correlation_stage(series, k, variant, options, [k, n](const Residuals& r, const VarianceFit& vf) {
            const ChangePointEstimate cp = correlation_cp_argmax(r, vf, k);
            guard_interior(cp, n);
            return relevant_correlation_statistic(r, vf, cp, k);
        });
    RelevantTestReport rep;
    rep.kind = TestKind::relevant_correlation;
    rep.n = n;
    rep.delta_threshold = delta;
    rep.change_point = correlation_cp_argmax(cs.base.res, cs.var, k);
    guard_interior(rep.change_point, n);
    rep.delta_estimate = correlation_delta(cs.base.res, cs.var, rep.change_point, k);
    rep.statistic = relevant_correlation_statistic(cs.base.res, cs.var, rep.change_point, k);
    fill_tuning(rep, cs.base, options, m);
    fill_correlation_tuning(rep, cs, options, k, variant);
    summarise_sample(rep, relevant_correlation_bootstrap(cs.base.res, cs.var, rep.change_point,
                                                         rep.delta_estimate, k, m, options.bootstrap));
    rep.levels = relevant_levels(rep.bootstrap_sorted, rep.statistic, delta, n, options.bootstrap.alphas);
    rep.p_value = relevant_p_value(rep.bootstrap_sorted, rep.statistic, delta, n);
    return rep;
}

std::vector<DeltaCurvePoint> delta_curve(const RelevantTestReport& report, std::span<const double> deltas) {
    std::vector<double> alphas;
    for (const auto& l : report.levels) alphas.push_back(l.alpha);
    std::vector<DeltaCurvePoint> out;
    out.reserve(deltas.size());
    for (double d : deltas) {
        check_delta(d);
        out.push_back({d, relevant_p_value(report.bootstrap_sorted, report.statistic, d, report.n),
                       relevant_levels(report.bootstrap_sorted, report.statistic, d, report.n, alphas)});
    }
    return out;
}

LocateReport locate(const TimeSeries& series, std::size_t k, const TestOptions& options) {
    check_series(series);
    const std::size_t n = series.size();
    const Kernel kernel(options.kernel);
    LocateReport rep;
    rep.n = n;
    rep.lag = k;

    const BandwidthChoice choice = options.mean_bandwidth.value_or(BandwidthChoice::gcv());
    if (choice.kind == BandwidthChoice::Kind::mv)
        throw std::invalid_argument("locate has no test statistic to drive minimal volatility");
    const double b = choice.kind == BandwidthChoice::Kind::fixed
                         ? choice.value
                         : gcv_select(series, kernel, options.bootstrap.exec).bandwidth;
    const MeanFit fit = local_linear_fit(series, b, kernel, options.bootstrap.exec);
    const Residuals res = residuals(series, fit);
    rep.mean_bandwidth = b;

    const LocatorParams lp = resolve_locator(options, n);
    rep.locator_L = lp.L;
    rep.locator_zeta = lp.zeta;
    rep.variance_window = variance_break_locate(res, lp.L, lp.zeta);

    rep.variance_cusum = variance_cp_argmax(res);
    rep.variance_delta = variance_delta(res, rep.variance_cusum);

    const double c = pick_variance_bandwidth(res, options, kernel);
    rep.variance_bandwidth = c;
    const VarianceFit vf =
        variance_fit_piecewise(res, rep.variance_window.index, c, b, kernel, options.bootstrap.exec);
    rep.correlation_cusum = correlation_cp_argmax(res, vf, k);
    rep.correlation_delta = correlation_delta(res, vf, rep.correlation_cusum, k);
    return rep;
}

}  // namespace secondchange
