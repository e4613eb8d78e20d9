// Command-line front end: CSV in, JSON or TSV out.
#include "secondchange/bandwidth.hpp"
#include "secondchange/ingest.hpp"
#include "secondchange/parallel.hpp"
#include "secondchange/pls_sim.hpp"
#include "secondchange/procedures.hpp"
#include "secondchange/report.hpp"
#include "secondchange/simstudy.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

namespace sc = secondchange;

namespace {

constexpr int kUsage = 2;
constexpr int kData = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string input;
    std::string column;
    std::string out = "-";
    std::string format = "json";
    int threads = 0;
    std::uint64_t seed = 1;
    bool timestamp = false;
    std::string kernel = "epanechnikov";
};

struct TestFlags {
    std::string bandwidth;
    std::string variance_bandwidth = "gcv";
    std::size_t window_m = 0;
    std::size_t L = 0;
    double zeta = 0.0;
    std::size_t B = 2000;
    std::vector<double> alphas{0.10, 0.05};
    std::size_t lag = 1;
    double delta = 0.0;
    bool no_variance_break = false;
    std::string delta_curve;
    std::string curve_out;
};

struct SimFlags {
    std::string model = "I";
    std::size_t n = 500;
    std::size_t runs = 200;
    std::vector<double> lambdas{0.0};
    std::vector<double> deltas;
    std::string test;
    bool no_mean = false;
};

double parse_number(const std::string& s, const char* what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        throw UsageError(std::string(what) + ": expected mv, gcv or a number, got '" + s + "'");
    return v;
}

sc::BandwidthChoice parse_bandwidth(const std::string& s, const char* what, bool allow_mv) {
    if (s == "gcv") return sc::BandwidthChoice::gcv();
    if (s == "mv") {
        if (!allow_mv) throw UsageError(std::string(what) + ": mv is not available here");
        return sc::BandwidthChoice::mv();
    }
    const double b = parse_number(s, what);
    if (!(b > 0.0 && b <= 0.5)) throw UsageError(std::string(what) + " must lie in (0, 0.5]");
    return sc::BandwidthChoice::fixed(b);
}

std::vector<double> parse_curve(const std::string& s) {
    // lo:hi:count
    std::vector<double> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(parse_number(item, "--delta-curve"));
    if (parts.size() != 3 || !(parts[0] > 0.0) || !(parts[1] >= parts[0]) || parts[2] < 1 ||
        parts[2] != std::floor(parts[2]))
        throw UsageError("--delta-curve expects lo:hi:count with 0 < lo <= hi and count >= 1");
    const auto count = static_cast<std::size_t>(parts[2]);
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = count == 1 ? parts[0]
                             : parts[0] + (parts[1] - parts[0]) * static_cast<double>(i) / static_cast<double>(count - 1);
    return grid;
}

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void emit(const Common& c, const std::string& text) {
    if (c.out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw sc::DataError("cannot write " + c.out, 0);
    f << text;
}

template <class Report>
void emit_report(const Common& c, const Report& rep, const sc::Provenance& prov) {
    if (c.format == "tsv") emit(c, sc::to_tsv(rep));
    else emit(c, sc::to_json(rep, prov).dump(2) + "\n");
}

sc::TestOptions build_options(const Common& c, const TestFlags& f, bool mv_allowed) {
    sc::TestOptions opt;
    if (!f.bandwidth.empty()) opt.mean_bandwidth = parse_bandwidth(f.bandwidth, "--bandwidth", mv_allowed);
    opt.variance_bandwidth = parse_bandwidth(f.variance_bandwidth, "--variance-bandwidth", false);
    if (f.L > 0) opt.locator_L = f.L;
    if (f.zeta != 0.0) {
        if (!(f.zeta > 0.0 && f.zeta < 0.5)) throw UsageError("--zeta must lie in (0, 0.5)");
        opt.locator_zeta = f.zeta;
    }
    opt.kernel = sc::parse_kernel(c.kernel);
    opt.bootstrap.window_m = f.window_m;
    opt.bootstrap.replicates = f.B;
    opt.bootstrap.seed = c.seed;
    opt.bootstrap.alphas = f.alphas;
    try {
        sc::validate(opt.bootstrap);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return opt;
}

void add_common(CLI::App* app, Common& c, bool needs_input) {
    auto* in = app->add_option("--input", c.input, "CSV file with a header row");
    if (needs_input) in->required();
    app->add_option("--column", c.column, "column name or 1-based number (default: first)");
    app->add_option("--out", c.out, "output path, - for stdout");
    app->add_option("--format", c.format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
    app->add_option("--threads", c.threads, "OpenMP threads (default: SECONDCHANGE_THREADS)")->check(CLI::PositiveNumber);
    app->add_option("--seed", c.seed, "master seed");
    app->add_flag("--timestamp", c.timestamp, "record the wall-clock time in the report");
    app->add_option("--kernel", c.kernel, "smoothing kernel")
        ->check(CLI::IsMember({"epanechnikov", "biweight", "triweight"}));
}

void add_test_flags(CLI::App* app, TestFlags& f, bool correlation, bool relevant) {
    app->add_option("--bandwidth", f.bandwidth, "mean bandwidth: mv, gcv or a value");
    app->add_option("--window-m", f.window_m, "bootstrap window m (default floor(n^(1/3)))");
    app->add_option("--B", f.B, "bootstrap replicates");
    app->add_option("--alpha", f.alphas, "significance levels")->delimiter(',');
    if (correlation) {
        app->add_option("--variance-bandwidth", f.variance_bandwidth, "variance bandwidth: gcv or a value");
        app->add_option("--lag", f.lag, "correlation lag k")->check(CLI::PositiveNumber);
        app->add_option("--L", f.L, "locator window L (default floor(n^(1/3)))");
        app->add_option("--zeta", f.zeta, "locator guard fraction (default max(0.016, L/n))");
        app->add_flag("--no-variance-break", f.no_variance_break, "use the smooth variance fit");
    }
    if (relevant) {
        app->add_option("--delta", f.delta, "relevance threshold")->required();
        app->add_option("--delta-curve", f.delta_curve, "extra thresholds lo:hi:count evaluated on the same bootstrap");
        app->add_option("--curve-out", f.curve_out, "write the delta curve as TSV to this path");
    }
}

int run(int argc, char** argv) {
    CLI::App app{"Change-point tests for the variance and lag-k correlation of locally stationary series"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(sc::library_version()));

    Common common;
    TestFlags flags;
    SimFlags sim;

    auto* tv = app.add_subcommand("test-variance", "classical test for a constant variance");
    auto* tc = app.add_subcommand("test-correlation", "classical test for a constant lag-k correlation");
    auto* trv = app.add_subcommand("test-relevant-variance", "test for a relevant change in the variance");
    auto* trc = app.add_subcommand("test-relevant-correlation", "test for a relevant change in the correlation");
    auto* loc = app.add_subcommand("locate", "estimate change points");
    auto* bw = app.add_subcommand("bandwidth", "GCV and minimal-volatility bandwidth paths");
    auto* simulate = app.add_subcommand("simulate", "simulate one of the benchmark models");
    auto* study = app.add_subcommand("simstudy", "rejection frequencies over simulated replications");

    for (auto* s : {tv, tc, trv, trc, loc, bw}) add_common(s, common, true);
    add_common(simulate, common, false);
    add_common(study, common, false);
    add_test_flags(tv, flags, false, false);
    add_test_flags(tc, flags, true, false);
    add_test_flags(trv, flags, false, true);
    add_test_flags(trc, flags, true, true);
    loc->add_option("--bandwidth", flags.bandwidth, "mean bandwidth: gcv or a value");
    loc->add_option("--variance-bandwidth", flags.variance_bandwidth, "variance bandwidth: gcv or a value");
    loc->add_option("--lag", flags.lag, "correlation lag k")->check(CLI::PositiveNumber);
    loc->add_option("--L", flags.L, "locator window L");
    loc->add_option("--zeta", flags.zeta, "locator guard fraction");

    for (auto* s : {simulate, study}) {
        s->add_option("--model", sim.model, "I, II, III, IV, V, VI, Ip, IIp, IIIp, IVp")->required();
        s->add_option("--n", sim.n, "sample size");
    }
    simulate->add_option("--lambda", sim.lambdas, "lambda for the primed models")->expected(1);
    simulate->add_flag("--no-mean", sim.no_mean, "omit the trend");
    study->add_option("--runs", sim.runs, "replications");
    study->add_option("--B", flags.B, "bootstrap replicates per run");
    study->add_option("--lambda", sim.lambdas, "lambda grid")->delimiter(',');
    study->add_option("--delta", sim.deltas, "delta grid for relevant tests")->delimiter(',');
    study->add_option("--lag", flags.lag, "correlation lag k")->check(CLI::PositiveNumber);
    study->add_option("--alpha", flags.alphas, "significance levels")->delimiter(',');
    study->add_option("--bandwidth", flags.bandwidth, "mean bandwidth: mv, gcv or a value");
    study->add_option("--variance-bandwidth", flags.variance_bandwidth, "variance bandwidth: gcv or a value");
    study->add_option("--window-m", flags.window_m, "bootstrap window m");
    study->add_option("--test", sim.test, "variance, correlation, relevant-variance or relevant-correlation")
        ->check(CLI::IsMember({"variance", "correlation", "relevant-variance", "relevant-correlation"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    if (common.threads > 0) sc::set_thread_count(common.threads);
    else if (auto env = sc::threads_from_environment()) sc::set_thread_count(*env);

    sc::Provenance prov{app.get_subcommands().front()->get_name(), common.seed, {}};
    if (common.timestamp) prov.timestamp = utc_now();

    try {
        if (tv->parsed() || tc->parsed() || trv->parsed() || trc->parsed()) {
            const bool relevant = trv->parsed() || trc->parsed();
            const sc::TestOptions opt = build_options(common, flags, true);
            if (relevant && !(flags.delta > 0.0)) throw UsageError("--delta must be positive");
            const std::vector<double> curve_grid =
                flags.delta_curve.empty() ? std::vector<double>{} : parse_curve(flags.delta_curve);
            const sc::TimeSeries y = sc::ingest_csv_file(common.input, common.column);
            const auto variant =
                flags.no_variance_break ? sc::VarianceVariant::smooth : sc::VarianceVariant::piecewise;
            if (!relevant) {
                const sc::TestReport rep = tv->parsed() ? sc::classical_variance_test(y, opt)
                                                        : sc::classical_correlation_test(y, flags.lag, variant, opt);
                emit_report(common, rep, prov);
            } else {
                const sc::RelevantTestReport rep =
                    trv->parsed() ? sc::relevant_variance_test(y, flags.delta, opt)
                                  : sc::relevant_correlation_test(y, flags.lag, flags.delta, variant, opt);
                const std::vector<sc::DeltaCurvePoint> curve = sc::delta_curve(rep, curve_grid);
                if (common.format == "tsv") emit(common, sc::to_tsv(rep));
                else emit(common, sc::to_json(rep, prov, curve).dump(2) + "\n");
                if (!flags.curve_out.empty()) {
                    std::ofstream f(flags.curve_out, std::ios::binary);
                    if (!f) throw sc::DataError("cannot write " + flags.curve_out, 0);
                    f << sc::delta_curve_tsv(curve);
                }
            }
        } else if (loc->parsed()) {
            sc::TestOptions opt = build_options(common, flags, false);
            const sc::TimeSeries y = sc::ingest_csv_file(common.input, common.column);
            emit_report(common, sc::locate(y, flags.lag, opt), prov);
        } else if (bw->parsed()) {
            const sc::TimeSeries y = sc::ingest_csv_file(common.input, common.column);
            const sc::Kernel kernel(sc::parse_kernel(common.kernel));
            sc::BandwidthReport rep;
            rep.n = y.size();
            rep.kernel = kernel.id();
            rep.mean_gcv = sc::gcv_select(y, kernel);
            const sc::Residuals res = sc::residuals(y, sc::local_linear_fit(y, rep.mean_gcv.bandwidth, kernel));
            rep.variance_gcv = sc::gcv_select_variance(res, kernel);
            rep.mv_grid = sc::default_mv_grid();
            rep.mv = sc::mv_select(rep.mv_grid, [&](double b) {
                try {
                    return sc::cusum_variance_statistic(sc::residuals(y, sc::local_linear_fit(y, b, kernel)));
                } catch (const std::exception&) {
                    return std::numeric_limits<double>::quiet_NaN();
                }
            });
            emit_report(common, rep, prov);
        } else if (simulate->parsed()) {
            sc::PlsModelSpec spec;
            try {
                spec.model = sc::parse_model(sim.model);
                spec.lambda = sim.lambdas.front();
                spec.include_mean = !sim.no_mean;
                sc::validate(spec);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            const sc::TimeSeries y = sc::simulate(spec, sim.n, common.seed);
            std::string text = "y\n";
            for (double v : y.values()) text += sc::format_double(v) + "\n";
            emit(common, text);
        } else if (study->parsed()) {
            sc::StudyConfig cfg;
            try {
                cfg.model = sc::parse_model(sim.model);
                cfg.lambdas = sim.lambdas;
                cfg.n = sim.n;
                cfg.runs = sim.runs;
                cfg.replicates = flags.B;
                cfg.seed = common.seed;
                cfg.alphas = flags.alphas;
                cfg.lag = flags.lag;
                cfg.deltas = sim.deltas;
                cfg.window_m = flags.window_m;
                for (auto kind : {sc::TestKind::variance, sc::TestKind::correlation, sc::TestKind::relevant_variance,
                                  sc::TestKind::relevant_correlation})
                    if (sim.test == sc::test_kind_name(kind)) cfg.test = kind;
                if (!flags.bandwidth.empty())
                    cfg.mean_bandwidth = parse_bandwidth(flags.bandwidth, "--bandwidth", true);
                cfg.variance_bandwidth = parse_bandwidth(flags.variance_bandwidth, "--variance-bandwidth", false);
                sc::validate(cfg);
                sc::BootstrapConfig b;
                b.replicates = cfg.replicates;
                b.alphas = cfg.alphas;
                sc::validate(b);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            emit_report(common, sc::run_study(cfg), prov);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kData;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
