#pragma once

#include "gsde/config.hpp"
#include "gsde/reports.hpp"

namespace gsde {

/// Validates the config, executes the selected pipeline and writes the
/// CSV/JSON artifacts plus a manifest into cfg.out_dir. Returns the bundle
/// with exit code 0 (success) or 2 (finished, but a solve failed to converge
/// within max_iter). Input errors throw before any compute.
ReportBundle run_experiment(const ExperimentConfig& cfg);

} // namespace gsde
