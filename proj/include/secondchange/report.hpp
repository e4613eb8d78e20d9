#pragma once

#include "secondchange/bandwidth.hpp"
#include "secondchange/procedures.hpp"
#include "secondchange/simstudy.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace secondchange {

[[nodiscard]] std::string_view library_version() noexcept;

struct Provenance {
    std::string command;
    std::uint64_t seed = 0;
    std::optional<std::string> timestamp;  // left out unless requested, so reruns stay byte-identical
};

/// Shortest decimal that round-trips to the same double.
[[nodiscard]] std::string format_double(double v);

/// Everything the `bandwidth` subcommand reports.
struct BandwidthReport {
    std::size_t n = 0;
    KernelId kernel = KernelId::epanechnikov;
    GcvSelection mean_gcv;
    GcvSelection variance_gcv;  // on the residuals of the GCV mean fit
    std::vector<double> mv_grid;
    MvSelection mv;             // over the classical variance statistic
};

[[nodiscard]] nlohmann::ordered_json to_json(const TestReport& report, const Provenance& prov);
[[nodiscard]] nlohmann::ordered_json to_json(const RelevantTestReport& report, const Provenance& prov,
                                             const std::vector<DeltaCurvePoint>& curve = {});
[[nodiscard]] nlohmann::ordered_json to_json(const LocateReport& report, const Provenance& prov);
[[nodiscard]] nlohmann::ordered_json to_json(const BandwidthReport& report, const Provenance& prov);
[[nodiscard]] nlohmann::ordered_json to_json(const StudyResult& study, const Provenance& prov);

/// Two-column field/value listing.
[[nodiscard]] std::string to_tsv(const TestReport& report);
[[nodiscard]] std::string to_tsv(const RelevantTestReport& report);
[[nodiscard]] std::string to_tsv(const LocateReport& report);
[[nodiscard]] std::string to_tsv(const BandwidthReport& report);
/// One row per (lambda, delta, alpha) cell.
[[nodiscard]] std::string to_tsv(const StudyResult& study);
/// delta, p_value, then one reject column per level.
[[nodiscard]] std::string delta_curve_tsv(const std::vector<DeltaCurvePoint>& curve);

}  // namespace secondchange
