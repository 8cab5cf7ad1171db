#pragma once

#include "lpball/config.hpp"
#include "lpball/report.hpp"

namespace lpball::runner {

/// Executes one verification suite. Scan failures are caught and recorded in
/// report.errors so that partial results survive; the suite verdict is the
/// conjunction of all row verdicts (informational rows do not vote) and
/// fails when any scan errored.
ExperimentReport run_suite(const ExperimentConfig& config);

/// run_suite plus persistence: writes `<suite>-report.json` and
/// `<suite>-rows.csv` under config.output_dir.
ExperimentReport run_suite_and_write(const ExperimentConfig& config);

} // namespace lpball::runner
