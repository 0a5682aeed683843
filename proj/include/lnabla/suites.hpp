#pragma once

#include <string>
#include <vector>

#include "lnabla/config.hpp"
#include "lnabla/report.hpp"

namespace lnabla {

/// The named check suites, in canonical order.
const std::vector<std::string>& suite_names();

struct SuiteRun {
    std::vector<CheckReport> reports;
    std::vector<std::string> faults; // per-task internal errors, empty on a clean run
};

/// Executes the requested suites over an OpenMP worker pool (tasks share
/// nothing mutable; report order is independent of scheduling).
SuiteRun run_suites(const VerifyConfig& cfg);

/// Serial reference runner: must produce byte-identical reports.
SuiteRun run_suites_serial(const VerifyConfig& cfg);

} // namespace lnabla
