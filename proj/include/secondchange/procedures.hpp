#pragma once

#include "secondchange/bandwidth.hpp"
#include "secondchange/bootstrap.hpp"
#include "secondchange/cusum.hpp"
#include "secondchange/kernel.hpp"
#include "secondchange/relevant.hpp"
#include "secondchange/smoothing.hpp"
#include "secondchange/time_series.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace secondchange {

/// Where a smoothing bandwidth comes from.
struct BandwidthChoice {
    enum class Kind { fixed, mv, gcv };
    Kind kind = Kind::gcv;
    double value = 0.0;

    static BandwidthChoice fixed(double b) { return {Kind::fixed, b}; }
    static BandwidthChoice mv() { return {Kind::mv, 0.0}; }
    static BandwidthChoice gcv() { return {Kind::gcv, 0.0}; }
};

[[nodiscard]] std::string_view bandwidth_source_name(BandwidthChoice::Kind kind);

enum class TestKind { variance, correlation, relevant_variance, relevant_correlation };

[[nodiscard]] std::string_view test_kind_name(TestKind kind);

struct TestOptions {
    std::optional<BandwidthChoice> mean_bandwidth;  // default: mv for variance tests, gcv otherwise
    BandwidthChoice variance_bandwidth = BandwidthChoice::gcv();
    std::optional<std::size_t> locator_L;  // default floor(n^{1/3})
    std::optional<double> locator_zeta;    // default max(0.016, L/n)
    KernelId kernel = KernelId::epanechnikov;
    BootstrapConfig bootstrap;
    std::vector<double> mv_grid = default_mv_grid();
};

/// The tuning that was actually used, recorded in every report.
struct Tuning {
    KernelId kernel = KernelId::epanechnikov;
    double mean_bandwidth = 0.0;
    BandwidthChoice::Kind mean_bandwidth_source = BandwidthChoice::Kind::fixed;
    std::optional<double> variance_bandwidth;
    std::optional<BandwidthChoice::Kind> variance_bandwidth_source;
    std::size_t window_m = 0;
    std::size_t replicates = 0;
    std::uint64_t seed = 0;
    std::optional<std::size_t> lag;
    std::optional<VarianceVariant> variance_variant;
    std::optional<std::size_t> locator_L;
    std::optional<double> locator_zeta;
};

/// Decision at one level. For classical tests threshold == critical_value; for
/// relevant tests threshold = delta^2 + critical_value * delta / sqrt(n).
struct LevelResult {
    double alpha = 0.0;
    double critical_value = 0.0;
    double threshold = 0.0;
    bool reject = false;
};

struct TestReport {
    TestKind kind = TestKind::variance;
    std::size_t n = 0;
    double statistic = 0.0;
    double p_value = 1.0;
    std::vector<LevelResult> levels;
    Tuning tuning;
    std::optional<VarianceBreak> variance_break;
    bool variance_floor_applied = false;
    double bootstrap_mean = 0.0;
    double bootstrap_sd = 0.0;
    std::vector<double> bootstrap_sorted;  // ascending M_(1..B); not serialised

    [[nodiscard]] bool rejects(double alpha) const;
};

struct RelevantTestReport : TestReport {
    double delta_threshold = 0.0;
    DeltaEstimate delta_estimate;
    ChangePointEstimate change_point;
};

/// Classical CUSUM test for a constant variance with multiplier-bootstrap
/// critical values.
[[nodiscard]] TestReport classical_variance_test(const TimeSeries& series, const TestOptions& options);

/// Classical CUSUM test for a constant lag-k correlation. `variant` selects the
/// smooth variance fit (no variance break assumed) or the piecewise fit around
/// the windowed variance-break locator.
[[nodiscard]] TestReport classical_correlation_test(const TimeSeries& series, std::size_t k,
                                                    VarianceVariant variant, const TestOptions& options);

/// Test of |Delta| <= delta for the variance jump.
[[nodiscard]] RelevantTestReport relevant_variance_test(const TimeSeries& series, double delta,
                                                        const TestOptions& options);

/// Test of |Delta| <= delta for the lag-k correlation jump.
[[nodiscard]] RelevantTestReport relevant_correlation_test(const TimeSeries& series, std::size_t k,
                                                           double delta, VarianceVariant variant,
                                                           const TestOptions& options);

/// Re-evaluates a relevant test at other thresholds from the same bootstrap
/// sample (the sample does not depend on delta).
struct DeltaCurvePoint {
    double delta = 0.0;
    double p_value = 1.0;
    std::vector<LevelResult> levels;
};

[[nodiscard]] std::vector<DeltaCurvePoint> delta_curve(const RelevantTestReport& report,
                                                       std::span<const double> deltas);

/// All three change-point locators on one series.
struct LocateReport {
    std::size_t n = 0;
    double mean_bandwidth = 0.0;
    double variance_bandwidth = 0.0;
    std::size_t lag = 1;
    std::size_t locator_L = 0;
    double locator_zeta = 0.0;
    VarianceBreak variance_window;            // t*_n
    ChangePointEstimate variance_cusum;       // t~_n
    ChangePointEstimate correlation_cusum;    // t^_n
    DeltaEstimate variance_delta;
    DeltaEstimate correlation_delta;
};

[[nodiscard]] LocateReport locate(const TimeSeries& series, std::size_t k, const TestOptions& options);

/// Effective locator parameters for sample size n.
struct LocatorParams {
    std::size_t L = 0;
    double zeta = 0.0;
};

[[nodiscard]] LocatorParams resolve_locator(const TestOptions& options, std::size_t n);

}  // namespace secondchange
