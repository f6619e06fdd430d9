#include "gsde/config.hpp"

#include "gsde/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>

namespace gsde {

using nlohmann::json;

namespace {

[[noreturn]] void bad_key(const std::string& path, const std::string& why) {
    throw InputError("config: key '" + path + "' " + why);
}

void check_keys(const json& obj, const std::string& prefix,
                const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key))
            bad_key(prefix.empty() ? key : prefix + "." + key, "is not recognized");
    }
}

template <typename T>
void read(const json& obj, const std::string& prefix, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        bad_key(prefix.empty() ? key : prefix + "." + std::string(key), "has the wrong type");
    }
}

} // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("config JSON parse error: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("config: top level must be an object");

    ExperimentConfig cfg;
    check_keys(doc, "",
               {"pipeline", "horizon", "steps", "state_dim", "driver_dim", "volatility",
                "replicates", "seed", "threads", "coefficient", "x0", "picard",
                "estimates", "integrals", "inputs", "output"});

    read(doc, "", "pipeline", cfg.pipeline);
    read(doc, "", "horizon", cfg.horizon);
    read(doc, "", "steps", cfg.steps);
    read(doc, "", "state_dim", cfg.state_dim);
    read(doc, "", "driver_dim", cfg.driver_dim);
    read(doc, "", "replicates", cfg.replicates);
    read(doc, "", "seed", cfg.seed);
    read(doc, "", "threads", cfg.threads);
    read(doc, "", "x0", cfg.x0);

    if (doc.contains("volatility")) {
        const auto& v = doc["volatility"];
        check_keys(v, "volatility", {"sigma_min", "sigma_max", "levels", "policy"});
        read(v, "volatility", "sigma_min", cfg.sigma_min);
        read(v, "volatility", "sigma_max", cfg.sigma_max);
        read(v, "volatility", "levels", cfg.control_levels);
        read(v, "volatility", "policy", cfg.control_policy);
    }
    if (doc.contains("coefficient")) {
        const auto& c = doc["coefficient"];
        check_keys(c, "coefficient", {"name", "params"});
        read(c, "coefficient", "name", cfg.coefficient);
        if (c.contains("params")) {
            if (!c["params"].is_object()) bad_key("coefficient.params", "must be an object");
            cfg.coefficient_params.clear();
            for (const auto& [k, val] : c["params"].items()) {
                if (!val.is_number())
                    bad_key("coefficient.params." + k, "must be a number");
                cfg.coefficient_params[k] = val.get<double>();
            }
        }
    }
    if (doc.contains("picard")) {
        const auto& p = doc["picard"];
        check_keys(p, "picard", {"tol", "max_iter"});
        read(p, "picard", "tol", cfg.tol);
        read(p, "picard", "max_iter", cfg.max_iter);
    }
    if (doc.contains("estimates")) {
        const auto& e = doc["estimates"];
        check_keys(e, "estimates",
                   {"p", "cp_choice", "separations", "noise_floor", "M", "rate_constant"});
        read(e, "estimates", "p", cfg.p);
        read(e, "estimates", "cp_choice", cfg.cp_choice);
        read(e, "estimates", "separations", cfg.separations);
        read(e, "estimates", "noise_floor", cfg.noise_floor);
        if (e.contains("M")) cfg.M_override = e["M"].get<double>();
        if (e.contains("rate_constant")) cfg.rate_constant = e["rate_constant"].get<double>();
    }
    if (doc.contains("integrals")) {
        const auto& i = doc["integrals"];
        check_keys(i, "integrals", {"eta", "eta_value", "p_bdg", "p_var"});
        read(i, "integrals", "eta", cfg.eta);
        read(i, "integrals", "eta_value", cfg.eta_value);
        read(i, "integrals", "p_bdg", cfg.p_bdg);
        read(i, "integrals", "p_var", cfg.p_var);
    }
    if (doc.contains("inputs")) {
        const auto& i = doc["inputs"];
        check_keys(i, "inputs", {"f", "g", "r_values"});
        read(i, "inputs", "f", cfg.input_f);
        read(i, "inputs", "g", cfg.input_g);
        read(i, "inputs", "r_values", cfg.r_values);
    }
    if (doc.contains("output")) {
        const auto& o = doc["output"];
        check_keys(o, "output", {"dir", "binary_dump", "timings"});
        read(o, "output", "dir", cfg.out_dir);
        read(o, "output", "binary_dump", cfg.binary_dump);
        read(o, "output", "timings", cfg.timings);
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open config file: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return config_from_json_text(text);
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
    json doc;
    doc["pipeline"] = cfg.pipeline;
    doc["horizon"] = cfg.horizon;
    doc["steps"] = cfg.steps;
    doc["state_dim"] = cfg.state_dim;
    doc["driver_dim"] = cfg.driver_dim;
    doc["volatility"] = {{"sigma_min", cfg.sigma_min},
                         {"sigma_max", cfg.sigma_max},
                         {"levels", cfg.control_levels},
                         {"policy", cfg.control_policy}};
    doc["replicates"] = cfg.replicates;
    doc["seed"] = cfg.seed;
    doc["threads"] = cfg.threads;
    doc["coefficient"] = {{"name", cfg.coefficient},
                          {"params", cfg.coefficient_params}};
    doc["x0"] = cfg.x0;
    doc["picard"] = {{"tol", cfg.tol}, {"max_iter", cfg.max_iter}};
    json estimates = {{"p", cfg.p},
                      {"cp_choice", cfg.cp_choice},
                      {"separations", cfg.separations},
                      {"noise_floor", cfg.noise_floor}};
    if (cfg.M_override) estimates["M"] = *cfg.M_override;
    if (cfg.rate_constant) estimates["rate_constant"] = *cfg.rate_constant;
    doc["estimates"] = estimates;
    doc["integrals"] = {{"eta", cfg.eta},
                        {"eta_value", cfg.eta_value},
                        {"p_bdg", cfg.p_bdg},
                        {"p_var", cfg.p_var}};
    doc["inputs"] = {{"f", cfg.input_f}, {"g", cfg.input_g}, {"r_values", cfg.r_values}};
    doc["output"] = {{"dir", cfg.out_dir},
                     {"binary_dump", cfg.binary_dump},
                     {"timings", cfg.timings}};
    return doc.dump(2);
}

std::string config_hash(const ExperimentConfig& cfg) {
    // the output location does not affect results, so it stays out of the hash
    ExperimentConfig canonical = cfg;
    canonical.out_dir.clear();
    const std::string text = config_to_json_text(canonical);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void validate_config(const ExperimentConfig& cfg) {
    static const std::set<std::string> pipelines{"metric", "integrals", "solve", "validate",
                                                 "classical-check"};
    if (!pipelines.count(cfg.pipeline))
        throw InputError("config: unknown pipeline '" + cfg.pipeline + "'");
    if (!(cfg.horizon > 0.0)) throw InputError("config: horizon must be positive");
    if (cfg.steps < 1) throw InputError("config: steps must be >= 1");
    if (cfg.replicates < 1) throw InputError("config: replicates must be >= 1");
    if (!(cfg.tol > 0.0)) throw InputError("config: picard.tol must be positive");
    if (cfg.max_iter < 1) throw InputError("config: picard.max_iter must be >= 1");
    if (!(cfg.sigma_min >= 0.0) || !(cfg.sigma_min <= cfg.sigma_max))
        throw InputError("config: need 0 <= sigma_min <= sigma_max");
    if (cfg.control_levels < 1) throw InputError("config: volatility.levels must be >= 1");
    if (cfg.control_policy != "static" && cfg.control_policy != "per-step")
        throw InputError("config: volatility.policy must be 'static' or 'per-step'");
    if (cfg.x0.size() != cfg.state_dim)
        throw InputError("config: x0 length must equal state_dim");
    if (cfg.state_dim < 1 || cfg.driver_dim < 1)
        throw InputError("config: dimensions must be >= 1");
    if (!coefficient_registry().count(cfg.coefficient))
        throw InputError("config: unknown coefficient family '" + cfg.coefficient + "'");
    if (cfg.pipeline == "metric") {
        if (cfg.input_f.empty())
            throw InputError("config: missing required key 'inputs.f' for the metric "
                             "pipeline");
        if (cfg.input_g.empty())
            throw InputError("config: missing required key 'inputs.g' for the metric "
                             "pipeline");
        for (double r : cfg.r_values)
            if (!(r > 0.0)) throw InputError("config: inputs.r_values must be positive");
    }
    if (cfg.pipeline == "integrals") {
        if (cfg.eta != "const" && cfg.eta != "linear-t" && cfg.eta != "sin-driver")
            throw InputError("config: integrals.eta must be const, linear-t or sin-driver");
        if (!(cfg.p_bdg >= 2.0)) throw InputError("config: integrals.p_bdg must be >= 2");
        if (!(cfg.p_var >= 1.0)) throw InputError("config: integrals.p_var must be >= 1");
    }
    if (cfg.pipeline == "validate" || cfg.pipeline == "classical-check") {
        if (!(cfg.p >= 2.0)) throw InputError("config: estimates.p must be >= 2");
        if (!(cfg.cp_choice > 0.0))
            throw InputError("config: estimates.cp_choice must be positive");
    }
    if (cfg.pipeline == "classical-check" && cfg.sigma_min != cfg.sigma_max)
        throw InputError("config: classical-check requires sigma_min == sigma_max");
}

} // namespace gsde
