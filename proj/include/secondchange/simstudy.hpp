#pragma once

#include "secondchange/parallel.hpp"
#include "secondchange/pls_sim.hpp"
#include "secondchange/procedures.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace secondchange {

/// The test a model is paired with in the simulation study.
[[nodiscard]] TestKind default_study_test(ModelId model);
/// Threshold delta for relevant tests: 1/64 on the variance models, 0.2 on the correlation models.
[[nodiscard]] double default_study_delta(ModelId model);

struct StudyConfig {
    ModelId model = ModelId::I;
    std::vector<double> lambdas{0.0};
    std::size_t n = 300;
    std::size_t runs = 200;
    std::size_t replicates = 500;
    std::uint64_t seed = 1;
    std::vector<double> alphas{0.10, 0.05};
    std::optional<TestKind> test;
    std::size_t lag = 1;
    std::vector<double> deltas;  // relevant tests; empty selects default_study_delta
    std::optional<BandwidthChoice> mean_bandwidth;
    BandwidthChoice variance_bandwidth = BandwidthChoice::gcv();
    std::optional<VarianceVariant> variance_variant;  // default follows the model
    std::size_t window_m = 0;
    Execution exec = Execution::parallel;
};

void validate(const StudyConfig& cfg);

struct StudyCell {
    double lambda = 0.0;
    std::optional<double> delta;
    double alpha = 0.0;
    std::size_t rejections = 0;
    std::size_t completed = 0;
    double rate = 0.0;
    double standard_error = 0.0;
};

struct StudyResult {
    StudyConfig config;
    TestKind test = TestKind::variance;
    VarianceVariant variance_variant = VarianceVariant::smooth;
    std::vector<StudyCell> cells;
    std::vector<std::size_t> failed_runs;  // per lambda: runs whose pipeline raised an error

    [[nodiscard]] const StudyCell& cell(double lambda, double alpha, std::optional<double> delta = {}) const;
};

/// Rejection frequencies over independent replications. Run r of every lambda
/// uses the same innovation and bootstrap seeds, so the lambda curve is traced
/// with common random numbers.
[[nodiscard]] StudyResult run_study(const StudyConfig& cfg);

}  // namespace secondchange
