#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "kml/suite/config.hpp"

namespace kml::suite {

/// One assertable check (or, inside a Finding, one probe run).
/// pass <=> max_residual <= tolerance; for probes pass means "completed".
struct CheckRecord {
  std::string name;
  std::string paper_anchor;
  std::size_t instances = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double wall_ms = 0.0;

  friend bool operator==(const CheckRecord&, const CheckRecord&) = default;
};

/// Probe output: reported, never asserted.
struct Finding {
  CheckRecord record;
  nlohmann::json details;
};

struct SuiteReport {
  SuiteConfig config;
  std::vector<CheckRecord> records;
  std::vector<Finding> findings;
  /// Probes never affect this.
  bool all_pass() const;
};

nlohmann::json to_json(const CheckRecord& r);
CheckRecord record_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SuiteReport& report);

/// JSON: {"schema", "config", "records", "findings", "summary"}, keys sorted.
/// CSV: RFC 4180, header name,paper_anchor,instances,max_residual,tolerance,pass,wall_ms;
/// assertable records only (findings are JSON-only).
std::string render_report(const SuiteReport& report, ReportFormat format);

/// Writes the rendered report; an empty path writes to standard output.
/// Throws Error if the path cannot be written.
void emit_report(const SuiteReport& report, ReportFormat format, const std::string& path);

std::vector<CheckRecord> parse_json_records(std::string_view text);
std::vector<CheckRecord> parse_csv_records(std::string_view text);

}  // namespace kml::suite
