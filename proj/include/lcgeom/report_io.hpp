#pragma once

#include <string>
#include <vector>

#include "lcgeom/divergence.hpp"
#include "lcgeom/serialization.hpp"

namespace lcgeom {

/// 17 significant digits, C locale, round-trip exact; infinities and NaN
/// spelled "inf"/"-inf"/"nan".
std::string format_number(double v);

/// RFC 4180 field quoting (quotes applied when the field contains a comma,
/// a quote or a line break; embedded quotes doubled).
std::string csv_field(const std::string& s);

Json report_to_json(const InequalityReport& r);
InequalityReport report_from_json(const Json& j);

/// Header + one row per report, CRLF line endings:
/// name,lhs,rhs,slack,tolerance,eq_tolerance,verdict,note.
std::string reports_to_csv(const std::vector<InequalityReport>& reports);

/// Columns (parameter, value, error_estimate), CRLF line endings.
std::string sweep_to_csv(const std::vector<std::array<double, 3>>& rows);

/// One fixed-layout console line per report.
std::string format_report_line(const InequalityReport& r);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace lcgeom
