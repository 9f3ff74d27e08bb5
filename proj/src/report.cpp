#include "polydens/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "polydens/error.hpp"

namespace polydens {

ReportFormat report_format_from_string(const std::string& text) {
  if (text == "json") return ReportFormat::json;
  if (text == "csv") return ReportFormat::csv;
  if (text == "plot-data") return ReportFormat::plot_data;
  throw ConfigError("unknown report format '" + text + "' (expected json, csv or plot-data)");
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string field(const std::optional<double>& v) { return v ? format_double(*v) : ""; }
std::string field(const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : ""; }

void emit_csv(const ExperimentReport& r, std::ostream& out) {
  out << "P,lattice_points,empirical,predicted,ratio,euler_value,euler_tail,li_value,li_error\r\n";
  for (const auto& row : r.rows) {
    const std::string cells[] = {std::to_string(row.P), std::to_string(row.lattice_points), field(row.empirical),
                                 field(row.predicted),  field(row.ratio),                   field(row.euler_value),
                                 field(row.euler_tail), field(row.li_value),                field(row.li_error)};
    for (std::size_t i = 0; i < std::size(cells); ++i) out << (i ? "," : "") << csv_field(cells[i]);
    out << "\r\n";
  }
}

void emit_plot_data(const ExperimentReport& r, std::ostream& out) {
  out << "# polydens " << r.version << " plot data\n";
  out << "# mode: " << to_string(r.config.mode) << "\n";
  out << "# polynomials:";
  for (const auto& p : r.config.polynomials) out << ' ' << p << ';';
  out << "\n# box: " << r.config.box.to_string() << "\n";
  out << "# columns: log(P) ratio\n";
  for (const auto& row : r.rows) {
    if (!row.ratio) continue;
    out << format_double(std::log(static_cast<double>(row.P))) << ' ' << format_double(*row.ratio) << '\n';
  }
}

}  // namespace

void emit_report(const ExperimentReport& report, ReportFormat format, std::ostream& out) {
  switch (format) {
    case ReportFormat::json: out << to_json(report).dump(2) << '\n'; break;
    case ReportFormat::csv: emit_csv(report, out); break;
    case ReportFormat::plot_data: emit_plot_data(report, out); break;
  }
}

void emit_report_file(const ExperimentReport& report, ReportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write report to " + path);
  emit_report(report, format, out);
  out.flush();
  if (!out) throw Error("failed writing report to " + path);
}

}  // namespace polydens
