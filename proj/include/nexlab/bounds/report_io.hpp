#pragma once

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

#include "nexlab/bounds/checks.hpp"

namespace nexlab {

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

nlohmann::json report_to_json(const BoundReport& r);

/// JSON array of reports, one object per report, newline terminated.
std::string reports_to_json_text(std::span<const BoundReport> reports);

/// Header check,lhs,rhs,slack,tol_budget,verdict,context; context as compact JSON.
std::string reports_to_csv(std::span<const BoundReport> reports);

/// Writes through a temporary file in the same directory and renames it into
/// place. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace nexlab
