#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "kml/errors.hpp"

namespace kml::suite {

inline constexpr std::string_view kReportSchema = "kernel-mult-lab/1";

/// Invalid configuration; the message starts with the JSON path of the offending field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class ReportFormat { json, csv };

std::string to_string(ReportFormat f);
ReportFormat parse_format(std::string_view s);

/// Runner configuration. Zero for points/features means "suite default".
struct SuiteConfig {
  std::string suite = "all";
  std::string kernel = "mixed";  // gaussian | laplacian | polynomial | brownian-min | mixed
  double gamma = 1.0;
  int degree = 2;
  double offset = 1.0;
  std::size_t points = 0;
  std::size_t features = 0;
  std::vector<double> p = {1.5, 2.0, 3.0, 4.0};
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::optional<double> tol;  // replaces every check's default tolerance
  std::string out;            // empty: standard output
  ReportFormat format = ReportFormat::json;

  friend bool operator==(const SuiteConfig&, const SuiteConfig&) = default;
};

const std::vector<std::string>& suite_names();
const std::vector<std::string>& kernel_names();

/// Throws ConfigError on any out-of-range field.
void validate(const SuiteConfig& config);

/// Parses the JSON config schema, fills defaults and validates.
SuiteConfig parse_config(std::string_view text);

nlohmann::json to_json(const SuiteConfig& config);
/// Canonical form: every field present, keys sorted, two-space indent.
std::string serialize_config(const SuiteConfig& config);

}  // namespace kml::suite
