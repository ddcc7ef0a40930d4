#pragma once

// Expands a RunConfig into suites, runs them and streams the records.

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "haarlib/config.hpp"

namespace haarlib {

struct SuiteTask {
  std::string label;
  std::function<std::vector<CheckReport>()> run;
};

/// Validates the config and lists the suites in report order.
std::vector<SuiteTask> plan(const RunConfig& cfg);

/// Runs every task; suites run concurrently when workers > 1 but records
/// keep plan order. A suite that throws yields one failing record.
std::vector<CheckReport> execute(const std::vector<SuiteTask>& tasks, int workers, std::uint64_t seed = 0);

/// 0 when every record passed, 1 otherwise.
int exit_status(const std::vector<CheckReport>& reports);

/// plan + execute + write. Returns the exit status; ConfigError propagates.
int run(const RunConfig& cfg, std::ostream& out);

}  // namespace haarlib
