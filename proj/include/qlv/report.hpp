#pragma once

#include <string>
#include <vector>

#include "qlv/verify.hpp"

namespace qlv {

inline constexpr const char* kReportSchema = "qlv-report/1";
inline constexpr const char* kCatalogVersion = "1";

// JSON report: manifest plus record arrays; every scalar is a decimal
// string, so a report replays bitwise at its stated precision. The
// timestamp is the only field allowed to differ between identical runs.
std::string report_to_json(const SuiteReport& report, const std::string& timestamp);
SuiteReport report_from_json(const std::string& json_text);

// One record per row; same decimal-string convention. The point travels as
// an embedded JSON object in the last column.
std::string report_to_csv(const SuiteReport& report);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// Point <-> JSON (also used by the eval subcommand's --point files).
std::string point_to_json(const ParameterPoint& pt, long precision_bits);
ParameterPoint point_from_json(const std::string& json_text);

// Run-configuration files use the same schema as the report's config
// block: {seed, samples, arities, margin, q_band, pole_threshold,
// schedule{initial_radius, max_radius, tol}, precision_bits, probe_bits,
// complex_q}.
SampleConfig config_from_json(const std::string& json_text);
std::string config_to_json(const SampleConfig& cfg);

struct Regression {
    std::string what;
};

// PASS -> non-PASS transitions keyed by (id, n, sample) and per-identity
// worst rel_err growth beyond 10x.
std::vector<Regression> baseline_compare(const SuiteReport& older,
                                         const SuiteReport& newer);

std::string iso_timestamp_now();

}  // namespace qlv
