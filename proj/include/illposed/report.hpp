#pragma once

// CSV and JSON serialization of run reports. Every floating-point value is
// written with 17 significant digits so a parse restores the same double.

#include "illposed/experiment.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

namespace illposed {

enum class ReportFormat { csv, json };

[[nodiscard]] ReportFormat report_format_from_name(std::string_view name);

/// csv for *.csv, json for *.json; throws InvalidArgument otherwise.
[[nodiscard]] ReportFormat report_format_from_path(const std::string& path);

inline constexpr std::string_view kCsvHeader =
    "epsilon,beta,t,error_h,bound_rhs,gamma_inv_T,gammaT_times_eps,iters,residual";

void write_csv(const RunReport& report, std::ostream& out);

/// {"config": ..., "rows": [...], "slopes": [...], "notices": [...]}.
[[nodiscard]] nlohmann::json report_to_json(const RunReport& report);

/// JSON text with doubles printed as %.17g.
[[nodiscard]] std::string dump_json(const nlohmann::json& value, int indent = 2);

/// Throws InvalidArgument for an empty report and Error naming the path when
/// the file cannot be written.
void emit_report(const RunReport& report, ReportFormat format, const std::string& path);

/// Rows of a JSON report, for round trips.
[[nodiscard]] std::vector<RunRow> rows_from_json(const nlohmann::json& report);

}  // namespace illposed
