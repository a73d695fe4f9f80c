#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "pipeline.hpp"

namespace ofp::cli {

inline constexpr const char* kReportSchema = "ofp-report/1";

using Json = nlohmann::ordered_json;

/// Finite numbers as JSON numbers; NaN and infinities as "nan", "inf", "-inf".
Json real(double v);

Json config_json(const RunConfig& config);
Json analysis_json(const Analysis& a);
Json report_json(const RunConfig& config, const std::vector<Analysis>& analyses, const Json& summary);

/// One row per function × variant × metric, with a header line.
std::string metrics_csv(const std::vector<Analysis>& analyses);

}  // namespace ofp::cli
