#include "secondchange/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#ifndef SECONDCHANGE_VERSION
#define SECONDCHANGE_VERSION "0.0.0"
#endif

namespace secondchange {

using Json = nlohmann::ordered_json;

std::string_view library_version() noexcept { return SECONDCHANGE_VERSION; }

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

template <class T, class F>
Json optional_json(const std::optional<T>& v, F&& f) {
    return v ? f(*v) : Json(nullptr);
}

Json provenance_json(const Provenance& p) {
    Json j;
    j["program"] = "secondchange";
    j["version"] = std::string(library_version());
    j["command"] = p.command;
    j["seed"] = p.seed;
    if (p.timestamp) j["timestamp"] = *p.timestamp;
    return j;
}

Json levels_json(const std::vector<LevelResult>& levels) {
    Json arr = Json::array();
    for (const auto& l : levels) {
        Json j;
        j["alpha"] = l.alpha;
        j["quantile_level"] = 1.0 - l.alpha;
        j["critical_value"] = l.critical_value;
        j["threshold"] = l.threshold;
        j["reject"] = l.reject;
        arr.push_back(std::move(j));
    }
    return arr;
}

Json tuning_json(const Tuning& t) {
    Json j;
    j["kernel"] = std::string(kernel_name(t.kernel));
    j["b"] = t.mean_bandwidth;
    j["b_source"] = std::string(bandwidth_source_name(t.mean_bandwidth_source));
    j["c"] = optional_json(t.variance_bandwidth, [](double c) { return Json(c); });
    j["c_source"] = optional_json(t.variance_bandwidth_source,
                                  [](BandwidthChoice::Kind k) { return Json(std::string(bandwidth_source_name(k))); });
    j["m"] = t.window_m;
    j["B"] = t.replicates;
    j["seed"] = t.seed;
    j["lag"] = optional_json(t.lag, [](std::size_t k) { return Json(k); });
    j["variance_variant"] = optional_json(
        t.variance_variant, [](VarianceVariant v) { return Json(std::string(variance_variant_name(v))); });
    j["L"] = optional_json(t.locator_L, [](std::size_t l) { return Json(l); });
    j["zeta"] = optional_json(t.locator_zeta, [](double z) { return Json(z); });
    return j;
}

Json break_json(const VarianceBreak& b) {
    Json j;
    j["index"] = b.index;
    j["fraction"] = b.fraction;
    j["contrast"] = b.contrast;
    return j;
}

Json change_point_json(const ChangePointEstimate& cp) {
    Json j;
    j["index"] = cp.index;
    j["fraction"] = cp.fraction;
    j["objective"] = cp.objective;
    return j;
}

Json delta_json(const DeltaEstimate& d) {
    Json j;
    j["before"] = d.before;
    j["after"] = d.after;
    j["delta"] = d.delta;
    return j;
}

Json base_json(const TestReport& r, const Provenance& prov) {
    Json j;
    j["kind"] = "test-report";
    j["provenance"] = provenance_json(prov);
    j["test"] = std::string(test_kind_name(r.kind));
    j["n"] = r.n;
    j["statistic"] = r.statistic;
    j["p_value"] = r.p_value;
    j["levels"] = levels_json(r.levels);
    j["tuning"] = tuning_json(r.tuning);
    j["variance_break"] = optional_json(r.variance_break, break_json);
    j["variance_floor_applied"] = r.variance_floor_applied;
    j["bootstrap"] = Json{{"mean", r.bootstrap_mean}, {"sd", r.bootstrap_sd}};
    j["relevant"] = nullptr;
    return j;
}

Json grid_json(std::span<const double> grid, std::span<const double> values, const char* value_name) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) arr.push_back(Json{{"bandwidth", grid[i]}, {value_name, number_or_null(values[i])}});
    return arr;
}

class Table {
public:
    void row(std::string_view key, const std::string& value) { out_ << key << '\t' << value << '\n'; }
    void row(std::string_view key, double value) { row(key, format_double(value)); }
    void row(std::string_view key, std::size_t value) { row(key, std::to_string(value)); }
    void row(std::string_view key, bool value) { row(key, std::string(value ? "true" : "false")); }
    [[nodiscard]] std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

void tsv_base(Table& t, const TestReport& r) {
    t.row("test", std::string(test_kind_name(r.kind)));
    t.row("n", r.n);
    t.row("statistic", r.statistic);
    t.row("p_value", r.p_value);
    for (const auto& l : r.levels) {
        const std::string suffix = "_" + format_double(l.alpha);
        t.row("critical_value" + suffix, l.critical_value);
        t.row("threshold" + suffix, l.threshold);
        t.row("reject" + suffix, l.reject);
    }
    t.row("kernel", std::string(kernel_name(r.tuning.kernel)));
    t.row("b", r.tuning.mean_bandwidth);
    t.row("b_source", std::string(bandwidth_source_name(r.tuning.mean_bandwidth_source)));
    if (r.tuning.variance_bandwidth) t.row("c", *r.tuning.variance_bandwidth);
    if (r.tuning.variance_bandwidth_source)
        t.row("c_source", std::string(bandwidth_source_name(*r.tuning.variance_bandwidth_source)));
    t.row("m", r.tuning.window_m);
    t.row("B", r.tuning.replicates);
    t.row("seed", std::to_string(r.tuning.seed));
    if (r.tuning.lag) t.row("lag", *r.tuning.lag);
    if (r.tuning.variance_variant) t.row("variance_variant", std::string(variance_variant_name(*r.tuning.variance_variant)));
    if (r.tuning.locator_L) t.row("L", *r.tuning.locator_L);
    if (r.tuning.locator_zeta) t.row("zeta", *r.tuning.locator_zeta);
    if (r.variance_break) {
        t.row("variance_break_index", r.variance_break->index);
        t.row("variance_break_fraction", r.variance_break->fraction);
    }
    t.row("variance_floor_applied", r.variance_floor_applied);
    t.row("bootstrap_mean", r.bootstrap_mean);
    t.row("bootstrap_sd", r.bootstrap_sd);
}

}  // namespace

Json to_json(const TestReport& report, const Provenance& prov) { return base_json(report, prov); }

Json to_json(const RelevantTestReport& report, const Provenance& prov, const std::vector<DeltaCurvePoint>& curve) {
    Json j = base_json(report, prov);
    Json rel;
    rel["delta"] = report.delta_threshold;
    rel["delta_estimate"] = delta_json(report.delta_estimate);
    rel["change_point"] = change_point_json(report.change_point);
    Json arr = Json::array();
    for (const auto& p : curve) {
        Json cj;
        cj["delta"] = p.delta;
        cj["p_value"] = p.p_value;
        cj["levels"] = levels_json(p.levels);
        arr.push_back(std::move(cj));
    }
    rel["delta_curve"] = std::move(arr);
    j["relevant"] = std::move(rel);
    return j;
}

Json to_json(const LocateReport& r, const Provenance& prov) {
    Json j;
    j["kind"] = "locate";
    j["provenance"] = provenance_json(prov);
    j["n"] = r.n;
    j["tuning"] = Json{{"b", r.mean_bandwidth}, {"c", r.variance_bandwidth}, {"lag", r.lag},
                       {"L", r.locator_L},      {"zeta", r.locator_zeta}};
    j["variance_window"] = break_json(r.variance_window);
    Json v = change_point_json(r.variance_cusum);
    v["delta_estimate"] = delta_json(r.variance_delta);
    j["variance_cusum"] = std::move(v);
    Json c = change_point_json(r.correlation_cusum);
    c["delta_estimate"] = delta_json(r.correlation_delta);
    j["correlation_cusum"] = std::move(c);
    return j;
}

Json to_json(const BandwidthReport& r, const Provenance& prov) {
    Json j;
    j["kind"] = "bandwidth";
    j["provenance"] = provenance_json(prov);
    j["n"] = r.n;
    j["kernel"] = std::string(kernel_name(r.kernel));
    j["mean_gcv"] = Json{{"bandwidth", r.mean_gcv.bandwidth},
                         {"path", grid_json(r.mean_gcv.grid, r.mean_gcv.scores, "score")}};
    j["variance_gcv"] = Json{{"bandwidth", r.variance_gcv.bandwidth},
                             {"path", grid_json(r.variance_gcv.grid, r.variance_gcv.scores, "score")}};
    Json sd = Json::array();
    for (double s : r.mv.sd_profile) sd.push_back(number_or_null(s));
    j["mv"] = Json{{"statistic", "variance"},
                   {"bandwidth", r.mv.bandwidth},
                   {"index", r.mv.index},
                   {"path", grid_json(r.mv_grid, r.mv.statistics, "statistic")},
                   {"sd_profile", std::move(sd)}};
    return j;
}

Json to_json(const StudyResult& s, const Provenance& prov) {
    Json j;
    j["kind"] = "simstudy";
    j["provenance"] = provenance_json(prov);
    j["model"] = std::string(model_name(s.config.model));
    j["test"] = std::string(test_kind_name(s.test));
    j["n"] = s.config.n;
    j["runs"] = s.config.runs;
    j["B"] = s.config.replicates;
    j["lag"] = s.config.lag;
    j["variance_variant"] = std::string(variance_variant_name(s.variance_variant));
    Json failed = Json::array();
    for (std::size_t i = 0; i < s.failed_runs.size(); ++i)
        failed.push_back(Json{{"lambda", s.config.lambdas[i]}, {"failed", s.failed_runs[i]}});
    j["failed_runs"] = std::move(failed);
    Json cells = Json::array();
    for (const auto& c : s.cells) {
        Json cj;
        cj["lambda"] = c.lambda;
        cj["delta"] = optional_json(c.delta, [](double d) { return Json(d); });
        cj["alpha"] = c.alpha;
        cj["rejections"] = c.rejections;
        cj["completed"] = c.completed;
        cj["rate"] = c.rate;
        cj["standard_error"] = c.standard_error;
        cells.push_back(std::move(cj));
    }
    j["cells"] = std::move(cells);
    return j;
}

std::string to_tsv(const TestReport& report) {
    Table t;
    tsv_base(t, report);
    return t.str();
}

std::string to_tsv(const RelevantTestReport& report) {
    Table t;
    tsv_base(t, report);
    t.row("delta", report.delta_threshold);
    t.row("delta_before", report.delta_estimate.before);
    t.row("delta_after", report.delta_estimate.after);
    t.row("delta_estimate", report.delta_estimate.delta);
    t.row("change_point_index", report.change_point.index);
    t.row("change_point_fraction", report.change_point.fraction);
    return t.str();
}

std::string to_tsv(const LocateReport& r) {
    Table t;
    t.row("n", r.n);
    t.row("b", r.mean_bandwidth);
    t.row("c", r.variance_bandwidth);
    t.row("lag", r.lag);
    t.row("L", r.locator_L);
    t.row("zeta", r.locator_zeta);
    t.row("variance_window_index", r.variance_window.index);
    t.row("variance_window_fraction", r.variance_window.fraction);
    t.row("variance_cusum_index", r.variance_cusum.index);
    t.row("variance_cusum_fraction", r.variance_cusum.fraction);
    t.row("variance_delta", r.variance_delta.delta);
    t.row("correlation_cusum_index", r.correlation_cusum.index);
    t.row("correlation_cusum_fraction", r.correlation_cusum.fraction);
    t.row("correlation_delta", r.correlation_delta.delta);
    return t.str();
}

std::string to_tsv(const BandwidthReport& r) {
    std::ostringstream out;
    out << "selector\tbandwidth\tvalue\tselected\n";
    auto emit = [&](const char* name, std::span<const double> grid, std::span<const double> values, double chosen) {
        for (std::size_t i = 0; i < grid.size(); ++i)
            out << name << '\t' << format_double(grid[i]) << '\t' << format_double(values[i]) << '\t'
                << (grid[i] == chosen ? "true" : "false") << '\n';
    };
    emit("mean_gcv", r.mean_gcv.grid, r.mean_gcv.scores, r.mean_gcv.bandwidth);
    emit("variance_gcv", r.variance_gcv.grid, r.variance_gcv.scores, r.variance_gcv.bandwidth);
    emit("mv_variance", r.mv_grid, r.mv.statistics, r.mv.bandwidth);
    return out.str();
}

std::string to_tsv(const StudyResult& s) {
    std::ostringstream out;
    out << "model\ttest\tn\tlambda\tdelta\talpha\trejections\tcompleted\trate\tstandard_error\n";
    for (const auto& c : s.cells) {
        out << model_name(s.config.model) << '\t' << test_kind_name(s.test) << '\t' << s.config.n << '\t'
            << format_double(c.lambda) << '\t' << (c.delta ? format_double(*c.delta) : "") << '\t'
            << format_double(c.alpha) << '\t' << c.rejections << '\t' << c.completed << '\t'
            << format_double(c.rate) << '\t' << format_double(c.standard_error) << '\n';
    }
    return out.str();
}

std::string delta_curve_tsv(const std::vector<DeltaCurvePoint>& curve) {
    std::ostringstream out;
    out << "delta\tp_value";
    if (!curve.empty())
        for (const auto& l : curve.front().levels) out << "\treject_" << format_double(l.alpha);
    out << '\n';
    for (const auto& p : curve) {
        out << format_double(p.delta) << '\t' << format_double(p.p_value);
        for (const auto& l : p.levels) out << '\t' << (l.reject ? 1 : 0);
        out << '\n';
    }
    return out.str();
}

}  // namespace secondchange
