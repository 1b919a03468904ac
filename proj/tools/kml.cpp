// kml: runs the verification suites and writes a JSON or CSV report.
//
// Exit status: 0 when every check passes, 1 when any check fails, 2 on usage
// or configuration errors.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "kml/errors.hpp"
#include "kml/suite/config.hpp"
#include "kml/suite/report.hpp"
#include "kml/suite/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw kml::suite::ConfigError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace kml::suite;

  CLI::App app{"Numerical verification suites for kernel multipliers"};
  app.require_subcommand(1);

  SuiteConfig cfg;
  std::string config_path;
  std::string format = "json";
  double tol = 0.0;

  auto* run = app.add_subcommand("run", "Run a verification suite");
  run->add_option("--suite", cfg.suite, "rkhs-core | hilbert-multipliers | sip-core | rkbs-core | "
                                        "banach-multipliers | all")
      ->capture_default_str();
  run->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  run->add_option("--trials", cfg.trials, "Random instances per check")->capture_default_str();
  run->add_option("--p", cfg.p, "Exponents in (1, inf)")->delimiter(',');
  run->add_option("--kernel", cfg.kernel, "gaussian | laplacian | polynomial | brownian-min | mixed")
      ->capture_default_str();
  run->add_option("--gamma", cfg.gamma, "Gaussian/Laplacian bandwidth")->capture_default_str();
  run->add_option("--degree", cfg.degree, "Polynomial degree")->capture_default_str();
  run->add_option("--offset", cfg.offset, "Polynomial offset")->capture_default_str();
  run->add_option("--points", cfg.points, "Maximum point count (0 = per-suite default)");
  run->add_option("--features", cfg.features, "Maximum feature count (0 = per-suite default)");
  auto* tol_opt = run->add_option("--tol", tol, "Override every check tolerance");
  run->add_option("--out", cfg.out, "Report path (stdout when omitted)");
  run->add_option("--format", format, "json | csv")->capture_default_str();
  run->add_option("--config", config_path, "JSON config file; replaces all other options");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (!config_path.empty()) {
      cfg = parse_config(read_file(config_path));
    } else {
      cfg.format = parse_format(format);
      if (*tol_opt) cfg.tol = tol;
    }
    validate(cfg);
  } catch (const kml::Error& e) {
    std::cerr << "kml: " << e.what() << '\n';
    return 2;
  }

  try {
    const SuiteReport report = run_suite(cfg);
    emit_report(report, cfg.format, cfg.out);
    std::size_t failed = 0;
    for (const auto& r : report.records) failed += r.pass ? 0 : 1;
    std::cerr << "kml: " << report.records.size() - failed << "/" << report.records.size()
              << " checks passed\n";
    return report.all_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "kml: " << e.what() << '\n';
    return 2;
  }
}
