#pragma once

#include <cstddef>
#include <functional>

#include "kml/suite/config.hpp"
#include "kml/suite/report.hpp"

namespace kml::suite {

/// Worker count for instance loops: KML_THREADS if set (>= 1), otherwise the
/// hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, count) on up to `workers` threads. Each index is
/// executed exactly once; results must be written to per-index slots.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

/// Executes the configured suite. Every residual is a function of the config
/// alone: per-instance generators are seeded by derive_seed(seed, check, index).
/// Fixture failures become failing records (max_residual = +inf).
SuiteReport run_suite(const SuiteConfig& config);

}  // namespace kml::suite
