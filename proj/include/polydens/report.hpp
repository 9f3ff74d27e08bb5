#pragma once

#include <ostream>
#include <string>

#include "polydens/experiment.hpp"

namespace polydens {

enum class ReportFormat { json, csv, plot_data };

/// Accepts "json", "csv" and "plot-data".
ReportFormat report_format_from_string(const std::string& text);

/// json: the full nested document. csv: header plus one row per P with
/// columns P,lattice_points,empirical,predicted,ratio,euler_value,euler_tail,
/// li_value,li_error (CRLF line ends, empty fields for missing values).
/// plot-data: '#' header lines then "log(P) ratio" per row with a ratio.
void emit_report(const ExperimentReport& report, ReportFormat format, std::ostream& out);

/// Writes to a file; throws Error when the path is not writable.
void emit_report_file(const ExperimentReport& report, ReportFormat format, const std::string& path);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& text);

/// %.17g
std::string format_double(double v);

}  // namespace polydens
