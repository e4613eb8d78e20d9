#include "secondchange/simstudy.hpp"

#include "secondchange/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace secondchange {

TestKind default_study_test(ModelId model) {
    switch (model) {
        case ModelId::I:
        case ModelId::II:
        case ModelId::I_prime: return TestKind::variance;
        case ModelId::III:
        case ModelId::II_prime: return TestKind::relevant_variance;
        case ModelId::IV:
        case ModelId::V:
        case ModelId::III_prime: return TestKind::correlation;
        case ModelId::VI:
        case ModelId::IV_prime: return TestKind::relevant_correlation;
    }
    throw std::invalid_argument("unknown model");
}

double default_study_delta(ModelId model) {
    const TestKind kind = default_study_test(model);
    if (kind == TestKind::relevant_variance) return 1.0 / 64.0;
    if (kind == TestKind::relevant_correlation) return 0.2;
    throw std::invalid_argument("model is not paired with a relevant test");
}

void validate(const StudyConfig& cfg) {
    if (cfg.runs < 100) throw std::invalid_argument("simulation study needs at least 100 runs");
    if (cfg.lambdas.empty()) throw std::invalid_argument("lambda grid is empty");
    if (cfg.alphas.empty()) throw std::invalid_argument("no significance levels");
    for (double l : cfg.lambdas) {
        PlsModelSpec spec;
        spec.model = cfg.model;
        spec.lambda = l;
        validate(spec);
    }
    for (double d : cfg.deltas)
        if (!(d > 0.0)) throw std::invalid_argument("delta must be positive");
}

const StudyCell& StudyResult::cell(double lambda, double alpha, std::optional<double> delta) const {
    for (const auto& c : cells) {
        if (std::abs(c.lambda - lambda) > 1e-12 || std::abs(c.alpha - alpha) > 1e-12) continue;
        if (delta.has_value() != c.delta.has_value()) continue;
        if (delta && std::abs(*delta - *c.delta) > 1e-12) continue;
        return c;
    }
    throw std::out_of_range("no such study cell");
}

namespace {

// Rejection indicators for one run: [delta index][alpha index].
using Decisions = std::vector<std::vector<char>>;

Decisions one_run(const StudyResult& study, const std::vector<double>& deltas, const TimeSeries& series,
                  const TestOptions& opt) {
    const StudyConfig& cfg = study.config;
    Decisions out;
    auto collect = [&](const std::vector<LevelResult>& levels) {
        std::vector<char> row;
        for (const auto& l : levels) row.push_back(l.reject ? 1 : 0);
        out.push_back(std::move(row));
    };
    switch (study.test) {
        case TestKind::variance: collect(classical_variance_test(series, opt).levels); break;
        case TestKind::correlation:
            collect(classical_correlation_test(series, cfg.lag, study.variance_variant, opt).levels);
            break;
        case TestKind::relevant_variance:
        case TestKind::relevant_correlation: {
            const RelevantTestReport rep =
                study.test == TestKind::relevant_variance
                    ? relevant_variance_test(series, deltas.front(), opt)
                    : relevant_correlation_test(series, cfg.lag, deltas.front(), study.variance_variant, opt);
            for (const auto& point : delta_curve(rep, deltas)) collect(point.levels);
            break;
        }
    }
    return out;
}

}  // namespace

StudyResult run_study(const StudyConfig& cfg) {
    validate(cfg);
    StudyResult study;
    study.config = cfg;
    study.test = cfg.test.value_or(default_study_test(cfg.model));
    const bool relevant =
        study.test == TestKind::relevant_variance || study.test == TestKind::relevant_correlation;

    PlsModelSpec base;
    base.model = cfg.model;
    bool any_break = false;
    for (double l : cfg.lambdas) {
        base.lambda = l;
        any_break = any_break || has_variance_break(base);
    }
    study.variance_variant =
        cfg.variance_variant.value_or(any_break ? VarianceVariant::piecewise : VarianceVariant::smooth);

    std::vector<double> deltas;
    if (relevant) deltas = cfg.deltas.empty() ? std::vector<double>{default_study_delta(cfg.model)} : cfg.deltas;
    const std::size_t rows = relevant ? deltas.size() : 1;
    const std::size_t na = cfg.alphas.size();

    for (double lambda : cfg.lambdas) {
        PlsModelSpec spec = base;
        spec.lambda = lambda;
        std::vector<Decisions> runs(cfg.runs);
        std::vector<char> ok(cfg.runs, 0);

        auto body = [&](std::size_t r) {
            TestOptions opt;
            opt.mean_bandwidth = cfg.mean_bandwidth;
            opt.variance_bandwidth = cfg.variance_bandwidth;
            opt.bootstrap.window_m = cfg.window_m;
            opt.bootstrap.replicates = cfg.replicates;
            opt.bootstrap.seed = derive_seed(cfg.seed, Stream::simulation_bootstrap, r);
            opt.bootstrap.alphas = cfg.alphas;
            opt.bootstrap.exec = Execution::serial;
            try {
                const TimeSeries y = simulate(spec, cfg.n, derive_seed(cfg.seed, Stream::simulation_run, r));
                runs[r] = one_run(study, deltas, y, opt);
                ok[r] = 1;
            } catch (const std::exception&) {
                ok[r] = 0;
            }
        };

        const auto total = static_cast<long long>(cfg.runs);
        if (cfg.exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
            for (long long r = 0; r < total; ++r) body(static_cast<std::size_t>(r));
        } else {
            for (long long r = 0; r < total; ++r) body(static_cast<std::size_t>(r));
        }

        std::size_t completed = 0;
        for (char c : ok) completed += c;
        study.failed_runs.push_back(cfg.runs - completed);
        for (std::size_t d = 0; d < rows; ++d) {
            for (std::size_t a = 0; a < na; ++a) {
                StudyCell cell;
                cell.lambda = lambda;
                if (relevant) cell.delta = deltas[d];
                cell.alpha = cfg.alphas[a];
                cell.completed = completed;
                for (std::size_t r = 0; r < cfg.runs; ++r)
                    if (ok[r] && runs[r][d][a]) ++cell.rejections;
                if (completed > 0) {
                    cell.rate = static_cast<double>(cell.rejections) / static_cast<double>(completed);
                    cell.standard_error = std::sqrt(cell.rate * (1.0 - cell.rate) / static_cast<double>(completed));
                }
                study.cells.push_back(cell);
            }
        }
    }
    return study;
}

}  // namespace secondchange
