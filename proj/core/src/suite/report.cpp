#include "kml/suite/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace kml::suite {

using nlohmann::json;

bool SuiteReport::all_pass() const {
  for (const auto& r : records) {
    if (!r.pass) return false;
  }
  return true;
}

namespace {

// JSON has no infinity; failing records carry "inf" as a string.
json number_or_inf(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

double read_number(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  return j.get<double>();
}

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  // strtod rather than stod: subnormals are valid residuals, not range errors
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw Error("report: malformed number \"" + s + "\"");
  return v;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

const char* kCsvHeader = "name,paper_anchor,instances,max_residual,tolerance,pass,wall_ms";

}  // namespace

json to_json(const CheckRecord& r) {
  json j;
  j["name"] = r.name;
  j["paper_anchor"] = r.paper_anchor;
  j["instances"] = r.instances;
  j["max_residual"] = number_or_inf(r.max_residual);
  j["tolerance"] = number_or_inf(r.tolerance);
  j["pass"] = r.pass;
  j["wall_ms"] = r.wall_ms;
  return j;
}

CheckRecord record_from_json(const json& j) {
  CheckRecord r;
  r.name = j.at("name").get<std::string>();
  r.paper_anchor = j.at("paper_anchor").get<std::string>();
  r.instances = j.at("instances").get<std::size_t>();
  r.max_residual = read_number(j.at("max_residual"));
  r.tolerance = read_number(j.at("tolerance"));
  r.pass = j.at("pass").get<bool>();
  r.wall_ms = j.at("wall_ms").get<double>();
  return r;
}

json to_json(const SuiteReport& report) {
  json j;
  j["schema"] = kReportSchema;
  j["config"] = to_json(report.config);
  j["records"] = json::array();
  for (const auto& r : report.records) j["records"].push_back(to_json(r));
  j["findings"] = json::array();
  for (const auto& f : report.findings) {
    j["findings"].push_back(json{{"record", to_json(f.record)}, {"details", f.details}});
  }
  std::size_t failed = 0;
  for (const auto& r : report.records) failed += r.pass ? 0 : 1;
  j["summary"] = json{{"checks", report.records.size()},
                      {"failed", failed},
                      {"probes", report.findings.size()},
                      {"pass", failed == 0}};
  return j;
}

std::string render_report(const SuiteReport& report, ReportFormat format) {
  if (format == ReportFormat::json) return to_json(report).dump(2) + "\n";
  std::ostringstream out;
  out << kCsvHeader << "\r\n";
  for (const auto& r : report.records) {
    out << csv_field(r.name) << ',' << csv_field(r.paper_anchor) << ',' << r.instances << ','
        << format_double(r.max_residual) << ',' << format_double(r.tolerance) << ','
        << (r.pass ? "true" : "false") << ',' << format_double(r.wall_ms) << "\r\n";
  }
  return out.str();
}

void emit_report(const SuiteReport& report, ReportFormat format, const std::string& path) {
  const std::string text = render_report(report, format);
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("emit_report: cannot open \"" + path + "\" for writing");
  file << text;
  if (!file) throw Error("emit_report: failed writing \"" + path + "\"");
}

std::vector<CheckRecord> parse_json_records(std::string_view text) {
  const json j = json::parse(text);
  std::vector<CheckRecord> out;
  for (const auto& r : j.at("records")) out.push_back(record_from_json(r));
  return out;
}

namespace {

// RFC 4180 rows; tolerates LF-only line endings.
std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<CheckRecord> parse_csv_records(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw Error("parse_csv_records: missing header");
  std::vector<CheckRecord> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (f.size() != 7) throw Error("parse_csv_records: row " + std::to_string(i) + " has " +
                                   std::to_string(f.size()) + " fields");
    CheckRecord r;
    r.name = f[0];
    r.paper_anchor = f[1];
    r.instances = static_cast<std::size_t>(std::stoull(f[2]));
    r.max_residual = parse_double(f[3]);
    r.tolerance = parse_double(f[4]);
    r.pass = f[5] == "true";
    r.wall_ms = parse_double(f[6]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace kml::suite
