// Experiment runner for the sublinear-expectation SDE laboratory.
//
// Subcommands mirror the pipelines: metric, integrals, solve, validate,
// classical-check. Every flag mirrors a config key; --config loads a JSON
// file first and explicit flags override it. Exit codes: 0 success,
// 1 input/runtime error, 2 finished but flagged non-convergent.

#include "gsde/errors.hpp"
#include "gsde/runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

struct CliState {
    std::string config_path;
    gsde::ExperimentConfig cfg;
};

void add_common_flags(CLI::App* cmd, CliState& state) {
    cmd->add_option("--config", state.config_path, "JSON config file (flags override it)");
    cmd->add_option("--seed", state.cfg.seed, "RNG seed")->capture_default_str();
    cmd->add_option("--out", state.cfg.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--threads", state.cfg.threads, "worker threads")
        ->capture_default_str();
    cmd->add_option("--horizon", state.cfg.horizon, "time horizon T")
        ->capture_default_str();
    cmd->add_option("--steps", state.cfg.steps, "number of Euler steps")
        ->capture_default_str();
    cmd->add_option("--replicates", state.cfg.replicates, "Monte Carlo replicates")
        ->capture_default_str();
    cmd->add_option("--sigma-min", state.cfg.sigma_min, "lower volatility bound")
        ->capture_default_str();
    cmd->add_option("--sigma-max", state.cfg.sigma_max, "upper volatility bound")
        ->capture_default_str();
    cmd->add_option("--controls", state.cfg.control_levels, "volatility control levels")
        ->capture_default_str();
    cmd->add_option("--policy", state.cfg.control_policy,
                    "control policy: static | per-step")
        ->capture_default_str();
    cmd->add_flag("--timings", state.cfg.timings,
                  "record wall-clock seconds in trace.csv (breaks byte reproducibility)");
    cmd->add_flag("--binary-dump", state.cfg.binary_dump,
                  "also dump the full ensemble as a flat binary file");
}

void add_solver_flags(CLI::App* cmd, CliState& state,
                      std::vector<std::string>& params) {
    cmd->add_option("--coefficient", state.cfg.coefficient,
                    "coefficient family from the registry")
        ->capture_default_str();
    cmd->add_option("--param", params,
                    "coefficient parameter as name=value (repeatable)");
    cmd->add_option("--x0", state.cfg.x0, "initial state components")
        ->capture_default_str();
    cmd->add_option("--tol", state.cfg.tol, "fixed-point stopping tolerance")
        ->capture_default_str();
    cmd->add_option("--max-iter", state.cfg.max_iter, "fixed-point iteration cap")
        ->capture_default_str();
}

void apply_params(const std::vector<std::string>& params, gsde::ExperimentConfig& cfg) {
    for (const auto& kv : params) {
        const auto pos = kv.find('=');
        if (pos == std::string::npos)
            throw gsde::InputError("--param expects name=value, got '" + kv + "'");
        const std::string key = kv.substr(0, pos);
        try {
            cfg.coefficient_params[key] = std::stod(kv.substr(pos + 1));
        } catch (const std::exception&) {
            throw gsde::InputError("--param " + key + ": value is not a number");
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sublinear-expectation SDE laboratory"};
    app.require_subcommand(1);

    CliState state;
    std::vector<std::string> params;

    auto* metric = app.add_subcommand("metric", "Lipschitz distance of two distributions");
    metric->add_option("f", state.cfg.input_f, "first serialized distribution")
        ->check(CLI::ExistingFile);
    metric->add_option("g", state.cfg.input_g, "second serialized distribution")
        ->check(CLI::ExistingFile);
    metric->add_option("--r", state.cfg.r_values, "extra radii for the scaled distance")
        ->capture_default_str();
    add_common_flags(metric, state);

    auto* integrals =
        app.add_subcommand("integrals", "stochastic integral inequality harness");
    integrals->add_option("--eta", state.cfg.eta, "integrand: const | linear-t | sin-driver")
        ->capture_default_str();
    integrals->add_option("--eta-value", state.cfg.eta_value, "integrand scale")
        ->capture_default_str();
    integrals->add_option("--p-bdg", state.cfg.p_bdg, "moment exponent, sup-integral branch")
        ->capture_default_str();
    integrals->add_option("--p-var", state.cfg.p_var, "moment exponent, variation branch")
        ->capture_default_str();
    add_common_flags(integrals, state);

    auto* solve = app.add_subcommand("solve", "fixed-point solve of the interacting system");
    add_solver_flags(solve, state, params);
    add_common_flags(solve, state);

    auto* validate = app.add_subcommand("validate", "a-priori estimate validation suite");
    add_solver_flags(validate, state, params);
    validate->add_option("--p", state.cfg.p, "moment exponent for the estimates")
        ->capture_default_str();
    validate->add_option("--cp-choice", state.cfg.cp_choice,
                         "constant used for the sup-integral moment inequality")
        ->capture_default_str();
    validate->add_option("--noise-floor", state.cfg.noise_floor,
                         "metric noise floor for the rate check")
        ->capture_default_str();
    add_common_flags(validate, state);

    auto* classical =
        app.add_subcommand("classical-check", "singleton-volatility closed-form oracle");
    add_solver_flags(classical, state, params);
    add_common_flags(classical, state);

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* active = app.get_subcommands().front();
        gsde::ExperimentConfig cfg;
        if (!state.config_path.empty()) cfg = gsde::load_config(state.config_path);

        // flags override whatever the file said
        auto overlay = [&](const char* flag, auto member) {
            if (active->count(flag)) cfg.*member = state.cfg.*member;
        };
        overlay("--seed", &gsde::ExperimentConfig::seed);
        overlay("--out", &gsde::ExperimentConfig::out_dir);
        overlay("--threads", &gsde::ExperimentConfig::threads);
        overlay("--horizon", &gsde::ExperimentConfig::horizon);
        overlay("--steps", &gsde::ExperimentConfig::steps);
        overlay("--replicates", &gsde::ExperimentConfig::replicates);
        overlay("--sigma-min", &gsde::ExperimentConfig::sigma_min);
        overlay("--sigma-max", &gsde::ExperimentConfig::sigma_max);
        overlay("--controls", &gsde::ExperimentConfig::control_levels);
        overlay("--policy", &gsde::ExperimentConfig::control_policy);
        if (active->count("--timings")) cfg.timings = state.cfg.timings;
        if (active->count("--binary-dump")) cfg.binary_dump = state.cfg.binary_dump;
        if (active == solve || active == validate || active == classical) {
            overlay("--coefficient", &gsde::ExperimentConfig::coefficient);
            overlay("--x0", &gsde::ExperimentConfig::x0);
            overlay("--tol", &gsde::ExperimentConfig::tol);
            overlay("--max-iter", &gsde::ExperimentConfig::max_iter);
            apply_params(params, cfg);
        }
        if (active == validate) {
            overlay("--p", &gsde::ExperimentConfig::p);
            overlay("--cp-choice", &gsde::ExperimentConfig::cp_choice);
            overlay("--noise-floor", &gsde::ExperimentConfig::noise_floor);
        }
        if (active == integrals) {
            overlay("--eta", &gsde::ExperimentConfig::eta);
            overlay("--eta-value", &gsde::ExperimentConfig::eta_value);
            overlay("--p-bdg", &gsde::ExperimentConfig::p_bdg);
            overlay("--p-var", &gsde::ExperimentConfig::p_var);
        }
        if (active == metric) {
            if (active->count("f")) cfg.input_f = state.cfg.input_f;
            if (active->count("g")) cfg.input_g = state.cfg.input_g;
            overlay("--r", &gsde::ExperimentConfig::r_values);
            cfg.pipeline = "metric";
        } else if (active == integrals) {
            cfg.pipeline = "integrals";
        } else if (active == solve) {
            cfg.pipeline = "solve";
        } else if (active == validate) {
            cfg.pipeline = "validate";
        } else {
            cfg.pipeline = "classical-check";
        }

        const gsde::ReportBundle bundle = gsde::run_experiment(cfg);
        std::cout << "wrote " << bundle.files.size() << " files to "
                  << bundle.out_dir.string() << "\n";
        for (const auto& msg : bundle.messages) std::cout << msg << "\n";
        return bundle.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
