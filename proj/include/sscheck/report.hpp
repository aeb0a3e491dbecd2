#pragma once

#include "sscheck/core.hpp"
#include "sscheck/ssc.hpp"

#include <json.hpp>

namespace sscheck {

inline constexpr const char* kReportSchemaId = "sscheck-report/1";

/// JSON form of a report. NC-SSC witnesses are expressed as weights on the
/// caller's original columns (before normalization and zero-column removal).
nlohmann::json to_json(const SscReport& report, const FactorMatrix& h);

Vector vector_from_json(const nlohmann::json& j);

}  // namespace sscheck
