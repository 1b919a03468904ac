#include "kml/suite/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace kml::suite {

using nlohmann::json;

std::string to_string(ReportFormat f) { return f == ReportFormat::json ? "json" : "csv"; }

ReportFormat parse_format(std::string_view s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  throw ConfigError("$.format: expected \"json\" or \"csv\", got \"" + std::string(s) + "\"");
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "rkhs-core", "hilbert-multipliers", "sip-core", "rkbs-core", "banach-multipliers", "all"};
  return names;
}

const std::vector<std::string>& kernel_names() {
  static const std::vector<std::string> names = {"gaussian", "laplacian", "polynomial",
                                                 "brownian-min", "mixed"};
  return names;
}

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

std::string get_string(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_string()) fail(std::string("$.") + key, "expected a string");
  return v.get<std::string>();
}

double get_number(const std::string& path, const json& v) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

std::uint64_t get_unsigned(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) fail(path, "must be non-negative");
  fail(path, "expected an unsigned integer");
}

}  // namespace

void validate(const SuiteConfig& c) {
  if (!contains(suite_names(), c.suite)) fail("$.suite", "unknown suite \"" + c.suite + "\"");
  if (!contains(kernel_names(), c.kernel)) fail("$.kernel", "unknown kernel \"" + c.kernel + "\"");
  if (!(c.gamma > 0.0) || !std::isfinite(c.gamma)) fail("$.gamma", "must be > 0");
  if (c.degree < 1) fail("$.degree", "must be >= 1");
  if (!(c.offset >= 0.0) || !std::isfinite(c.offset)) fail("$.offset", "must be >= 0");
  if (c.trials < 1) fail("$.trials", "must be >= 1");
  if (c.p.empty()) fail("$.p", "at least one exponent required");
  for (std::size_t i = 0; i < c.p.size(); ++i) {
    if (!(c.p[i] > 1.0) || !std::isfinite(c.p[i]))
      fail("$.p[" + std::to_string(i) + "]", "must lie in (1, inf)");
  }
  if (c.points != 0 && c.features != 0 && c.points < c.features)
    fail("$.features", "must not exceed points (m >= n >= 1)");
  if (c.tol && (!(*c.tol > 0.0) || !std::isfinite(*c.tol))) fail("$.tol", "must be > 0");
}

SuiteConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("$: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("$: expected a JSON object");

  static const std::set<std::string> known = {"suite", "kernel", "gamma", "degree", "offset",
                                              "points", "features", "p", "trials", "seed",
                                              "tol", "out", "format"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) fail("$." + key, "unknown field");
  }

  SuiteConfig c;
  if (j.contains("suite")) c.suite = get_string(j, "suite");
  if (j.contains("kernel")) c.kernel = get_string(j, "kernel");
  if (j.contains("gamma")) c.gamma = get_number("$.gamma", j["gamma"]);
  if (j.contains("degree")) {
    const auto& v = j["degree"];
    if (!v.is_number_integer()) fail("$.degree", "expected an integer");
    c.degree = v.get<int>();
  }
  if (j.contains("offset")) c.offset = get_number("$.offset", j["offset"]);
  if (j.contains("points")) c.points = get_unsigned(j["points"], "$.points");
  if (j.contains("features")) c.features = get_unsigned(j["features"], "$.features");
  if (j.contains("p")) {
    const auto& v = j["p"];
    c.p.clear();
    if (v.is_number()) {
      c.p.push_back(v.get<double>());
    } else if (v.is_array()) {
      for (std::size_t i = 0; i < v.size(); ++i)
        c.p.push_back(get_number("$.p[" + std::to_string(i) + "]", v[i]));
    } else {
      fail("$.p", "expected a number or an array of numbers");
    }
  }
  if (j.contains("trials")) c.trials = get_unsigned(j["trials"], "$.trials");
  if (j.contains("seed")) c.seed = get_unsigned(j["seed"], "$.seed");
  if (j.contains("tol") && !j["tol"].is_null()) c.tol = get_number("$.tol", j["tol"]);
  if (j.contains("out")) c.out = get_string(j, "out");
  if (j.contains("format")) c.format = parse_format(get_string(j, "format"));
  validate(c);
  return c;
}

json to_json(const SuiteConfig& c) {
  json j;
  j["suite"] = c.suite;
  j["kernel"] = c.kernel;
  j["gamma"] = c.gamma;
  j["degree"] = c.degree;
  j["offset"] = c.offset;
  j["points"] = c.points;
  j["features"] = c.features;
  j["p"] = c.p;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["tol"] = c.tol ? json(*c.tol) : json(nullptr);
  j["out"] = c.out;
  j["format"] = to_string(c.format);
  return j;
}

std::string serialize_config(const SuiteConfig& c) { return to_json(c).dump(2); }

}  // namespace kml::suite
