#pragma once

#include "gsde/ensemble.hpp"
#include "gsde/metric.hpp"
#include "gsde/sublinear.hpp"

#include <filesystem>
#include <string>

namespace gsde {

/// Distributions serialize to JSON: {"dim": n, "measures": [[[point], weight],
/// ...], ...]}. Numbers use shortest round-trip formatting, so a write/read
/// cycle reproduces every coordinate and weight exactly.
std::string distribution_to_json(const EmpiricalSublinearDistribution& dist);
EmpiricalSublinearDistribution distribution_from_json(const std::string& text);

void save_distribution(const EmpiricalSublinearDistribution& dist,
                       const std::filesystem::path& path);
EmpiricalSublinearDistribution load_distribution(const std::filesystem::path& path);

/// Metric results serialize to a flat JSON report.
std::string metric_result_to_json(const MetricResult& result);

/// Flat little-endian binary dump of a full ensemble for debugging:
/// magic "GSDEENS1", then u32 controls / replicates / grid points /
/// state_dim / driver_dim, u64 seed, the grid times, the state array and the
/// driver array, all row-major doubles.
void write_ensemble_binary(const PathEnsemble& ens, const std::filesystem::path& path);

} // namespace gsde
