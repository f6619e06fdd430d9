#pragma once

#include "gsde/coefficients.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gsde {

/// Full experiment description. Every field has a default documented in the
/// README; configs are JSON with nested sections and strict key checking.
struct ExperimentConfig {
    std::string pipeline = "solve"; ///< metric|integrals|solve|validate|classical-check

    double horizon = 1.0;
    std::size_t steps = 200;
    std::size_t state_dim = 1;
    std::size_t driver_dim = 1;

    double sigma_min = 0.2;
    double sigma_max = 0.2;
    std::size_t control_levels = 1;
    std::string control_policy = "static"; ///< static | per-step

    std::size_t replicates = 10000;
    std::uint64_t seed = 42;
    std::size_t threads = 1;

    std::string coefficient = "mean-field-ou";
    CoefficientParams coefficient_params = {{"a", -1.0}, {"b", 0.5}, {"sigma", 1.0}};
    std::vector<double> x0 = {1.0};

    double tol = 1e-3;
    std::size_t max_iter = 15;

    double p = 2.0;
    double cp_choice = 4.0;
    std::vector<double> separations = {1.0, 0.1, 0.01};
    double noise_floor = 1e-7;
    std::optional<double> M_override;
    std::optional<double> rate_constant;

    std::string eta = "const"; ///< const | linear-t | sin-driver
    double eta_value = 1.0;
    double p_bdg = 2.0;
    double p_var = 1.0;

    std::string input_f; ///< metric pipeline: serialized distribution paths
    std::string input_g;
    std::vector<double> r_values = {0.5, 2.0, 10.0};

    std::string out_dir = "out";
    bool binary_dump = false;
    /// Wall-clock seconds in trace.csv; off by default so that outputs are
    /// byte-reproducible run to run.
    bool timings = false;
};

/// Parses a JSON config. Unknown keys and malformed values raise InputError
/// with the offending dotted path; missing keys fall back to defaults.
ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical JSON dump (sorted keys); load(config_to_json_text(c)) == c.
std::string config_to_json_text(const ExperimentConfig& cfg);

/// FNV-1a hash of the canonical dump, as fixed-width hex.
std::string config_hash(const ExperimentConfig& cfg);

/// Structural validation shared by the runner and the CLI: ranges, registry
/// membership, pipeline-specific required keys. Throws InputError.
void validate_config(const ExperimentConfig& cfg);

} // namespace gsde
