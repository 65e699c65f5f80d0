#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "jetcheck/analysis.hpp"

namespace jetcheck {

enum class ReportFormat { Json, Csv, Human };

ReportFormat parse_report_format(const std::string& name);

nlohmann::json verdict_to_json(const ConditionVerdict& v);
ConditionVerdict verdict_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const nlohmann::json& j);

/// Number with 17 significant digits, independent of the locale.
std::string format_number(double v);

std::string emit_report(const AnalysisReport& report, ReportFormat format);

/// Writes the serialized report; throws Error when the file cannot be written.
void write_report(const AnalysisReport& report, ReportFormat format, const std::filesystem::path& path);

}  // namespace jetcheck
