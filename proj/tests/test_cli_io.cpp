#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gsde/errors.hpp"
#include "gsde/runner.hpp"
#include "gsde/serialize.hpp"
#include "test_support.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace gsde;

namespace {

std::filesystem::path fresh_dir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() / ("gsde_test_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig small_solve_config(const std::filesystem::path& out) {
    ExperimentConfig cfg;
    cfg.pipeline = "solve";
    cfg.steps = 20;
    cfg.replicates = 200;
    cfg.seed = 42;
    cfg.out_dir = out.string();
    return cfg;
}

} // namespace

TEST_CASE("config: minimal text parses to the documented defaults") {
    const auto cfg = config_from_json_text("{}");
    CHECK(cfg.pipeline == "solve");
    CHECK(cfg.horizon == 1.0);
    CHECK(cfg.steps == 200);
    CHECK(cfg.replicates == 10000);
    CHECK(cfg.seed == 42);
    CHECK(cfg.coefficient == "mean-field-ou");
    CHECK(cfg.tol == 1e-3);
    CHECK(cfg.max_iter == 15);
    CHECK(cfg.threads == 1);
}

TEST_CASE("config: unknown keys rejected with their dotted path") {
    CHECK_THROWS_WITH_AS(config_from_json_text(R"({"horizont": 2.0})"),
                         doctest::Contains("horizont"), InputError);
    CHECK_THROWS_WITH_AS(config_from_json_text(R"({"picard": {"tolx": 1}})"),
                         doctest::Contains("picard.tolx"), InputError);
}

TEST_CASE("config: missing required key for the metric pipeline is named") {
    auto cfg = config_from_json_text(R"({"pipeline": "metric"})");
    CHECK_THROWS_WITH_AS(validate_config(cfg), doctest::Contains("inputs.f"), InputError);
    cfg.input_f = "F.json";
    CHECK_THROWS_WITH_AS(validate_config(cfg), doctest::Contains("inputs.g"), InputError);
}

TEST_CASE("config: structural validation catches bad values") {
    ExperimentConfig cfg;
    cfg.coefficient = "no-such-family";
    CHECK_THROWS_AS(validate_config(cfg), InputError);
    cfg = ExperimentConfig{};
    cfg.tol = 0.0;
    CHECK_THROWS_AS(validate_config(cfg), InputError);
    cfg = ExperimentConfig{};
    cfg.sigma_min = 2.0;
    cfg.sigma_max = 1.0;
    CHECK_THROWS_AS(validate_config(cfg), InputError);
    cfg = ExperimentConfig{};
    cfg.x0 = {1.0, 2.0}; // length != state_dim
    CHECK_THROWS_AS(validate_config(cfg), InputError);
}

TEST_CASE("config: round-trip preserves the hash") {
    ExperimentConfig cfg;
    cfg.pipeline = "integrals";
    cfg.sigma_min = 1.0;
    cfg.sigma_max = 2.0;
    cfg.control_levels = 5;
    cfg.coefficient_params = {{"a", -0.5}, {"b", 0.25}, {"sigma", 0.3}};
    cfg.M_override = 0.125;
    const std::string text = config_to_json_text(cfg);
    const auto back = config_from_json_text(text);
    CHECK(config_hash(back) == config_hash(cfg));
    CHECK(config_to_json_text(back) == text);
}

TEST_CASE("distribution serialization: exact round-trip") {
    const auto dist = testing::random_pool_distribution(55, 1, 9, 3, 4);
    const auto back = distribution_from_json(distribution_to_json(dist));
    REQUIRE(back.measure_count() == dist.measure_count());
    for (std::size_t m = 0; m < dist.measure_count(); ++m) {
        REQUIRE(back.measure(m).size() == dist.measure(m).size());
        for (std::size_t i = 0; i < dist.measure(m).size(); ++i) {
            CHECK(back.measure(m).point(i)[0] == dist.measure(m).point(i)[0]);
            CHECK(back.measure(m).weight(i) == dist.measure(m).weight(i));
        }
    }
    CHECK_THROWS_AS(distribution_from_json("{\"measures\": []}"), InputError);
    CHECK_THROWS_AS(distribution_from_json("not json"), InputError);
}

TEST_CASE("run_experiment: unknown coefficient fails before compute") {
    auto cfg = small_solve_config(fresh_dir("badcoeff"));
    cfg.coefficient = "bogus";
    CHECK_THROWS_AS(run_experiment(cfg), InputError);
}

TEST_CASE("run_experiment: solve pipeline writes the artifact set") {
    const auto dir = fresh_dir("solve");
    auto cfg = small_solve_config(dir);
    const auto bundle = run_experiment(cfg);
    CHECK(bundle.exit_code == 0);
    CHECK(std::filesystem::exists(dir / "trace.csv"));
    CHECK(std::filesystem::exists(dir / "ensemble_stats.csv"));
    CHECK(std::filesystem::exists(dir / "distribution.json"));
    CHECK(std::filesystem::exists(dir / "manifest.json"));

    // CSV contract: header row, LF endings, '.' decimals
    const std::string trace = slurp(dir / "trace.csv");
    CHECK(trace.rfind("k,delta,seconds\n", 0) == 0);
    CHECK(trace.find("\r") == std::string::npos);
    CHECK(trace.find(",") != std::string::npos);

    const std::string manifest = slurp(dir / "manifest.json");
    CHECK(manifest.find(config_hash(cfg)) != std::string::npos);
}

TEST_CASE("run_experiment: non-convergence flags exit code two") {
    const auto dir = fresh_dir("noconv");
    auto cfg = small_solve_config(dir);
    cfg.max_iter = 1;
    cfg.tol = 1e-13; // below the metric noise floor on a mean-field problem
    const auto bundle = run_experiment(cfg);
    CHECK(bundle.exit_code == 2);
}

TEST_CASE("run_experiment: metric pipeline consumes serialized distributions") {
    const auto dir = fresh_dir("metric");
    const auto F = testing::dist1d(
        {WeightedMeasure::dirac1d(0.0), WeightedMeasure::dirac1d(2.0)});
    const auto G = testing::dist1d({WeightedMeasure::dirac1d(1.0)});
    save_distribution(F, dir / "F.json");
    save_distribution(G, dir / "G.json");

    ExperimentConfig cfg;
    cfg.pipeline = "metric";
    cfg.input_f = (dir / "F.json").string();
    cfg.input_g = (dir / "G.json").string();
    cfg.out_dir = (dir / "out").string();
    const auto bundle = run_experiment(cfg);
    CHECK(bundle.exit_code == 0);

    const std::string metric = slurp(dir / "out" / "metric.json");
    CHECK(metric.find("\"value\": 1.0") != std::string::npos);
    const std::string csv = slurp(dir / "out" / "metric.csv");
    CHECK(csv.rfind("quantity,r,value,direction,attaining_measure\n", 0) == 0);
}

TEST_CASE("run_experiment: integrals and classical-check produce their csvs") {
    {
        const auto dir = fresh_dir("integrals");
        ExperimentConfig cfg;
        cfg.pipeline = "integrals";
        cfg.sigma_min = 1.0;
        cfg.sigma_max = 2.0;
        cfg.control_levels = 3;
        cfg.steps = 16;
        cfg.replicates = 500;
        cfg.out_dir = dir.string();
        const auto bundle = run_experiment(cfg);
        CHECK(bundle.exit_code == 0);
        const std::string csv = slurp(dir / "inequalities.csv");
        CHECK(csv.rfind("lemma,p,lhs,rhs,se,margin\n", 0) == 0);
        CHECK(csv.find("ito_mean_zero") != std::string::npos);
        CHECK(csv.find("variation_bound") != std::string::npos);
    }
    {
        const auto dir = fresh_dir("classical");
        ExperimentConfig cfg;
        cfg.pipeline = "classical-check";
        cfg.steps = 50;
        cfg.replicates = 500;
        cfg.out_dir = dir.string();
        const auto bundle = run_experiment(cfg);
        CHECK(bundle.exit_code == 0);
        const std::string csv = slurp(dir / "classical.csv");
        CHECK(csv.rfind("check,t,lhs,bound,margin,se\n", 0) == 0);
        CHECK(csv.find("classical_mean") != std::string::npos);
    }
}

TEST_CASE("run_experiment: byte-identical outputs across runs and worker counts") {
    auto run = [&](const std::string& tag, std::size_t threads) {
        const auto dir = fresh_dir("det_" + tag);
        auto cfg = small_solve_config(dir);
        cfg.threads = threads;
        // thread count is execution detail; keep it out of the compared config
        cfg.out_dir = dir.string();
        run_experiment(cfg);
        return dir;
    };
    const auto a = run("a", 1);
    const auto b = run("b", 1);
    const auto c = run("c", 8);
    for (const char* name : {"trace.csv", "ensemble_stats.csv", "distribution.json"}) {
        const std::string ra = slurp(a / name);
        CHECK(ra == slurp(b / name));
        CHECK(ra == slurp(c / name));
    }
}

TEST_CASE("binary ensemble dump: header and payload sizes") {
    const auto dir = fresh_dir("bin");
    const auto u = VolatilityUncertainty::interval(1.0, 1.0);
    const auto ens = simulate_gbm(u, ControlGrid::uniform(u, 1),
                                  TimeGrid::uniform(1.0, 4), 3, 9);
    write_ensemble_binary(ens, dir / "ens.bin");
    const std::string blob = slurp(dir / "ens.bin");
    REQUIRE(blob.size() >= 8 + 5 * 4 + 8);
    CHECK(blob.substr(0, 8) == "GSDEENS1");
    // controls=1, replicates=3, points=5, state=1, driver=1
    const auto u32 = [&](std::size_t off) {
        return static_cast<unsigned>(static_cast<unsigned char>(blob[off])) |
               (static_cast<unsigned>(static_cast<unsigned char>(blob[off + 1])) << 8) |
               (static_cast<unsigned>(static_cast<unsigned char>(blob[off + 2])) << 16) |
               (static_cast<unsigned>(static_cast<unsigned char>(blob[off + 3])) << 24);
    };
    CHECK(u32(8) == 1);
    CHECK(u32(12) == 3);
    CHECK(u32(16) == 5);
    const std::size_t expected =
        8 + 20 + 8 + 8 * (5 + 3 * 5 + 3 * 5); // header + times + states + driver
    CHECK(blob.size() == expected);
}

#ifdef GSDE_TOOL_PATH
TEST_CASE("cli binary: exit codes and reproducible files") {
    const auto dir = fresh_dir("clibin");
    const std::string tool = GSDE_TOOL_PATH;

    auto run_cli = [&](const std::string& args) {
        const std::string cmd = tool + " " + args + " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WEXITSTATUS(status);
    };

    const auto out1 = dir / "run1";
    const auto out2 = dir / "run2";
    const std::string base = "solve --steps 10 --replicates 100 --seed 7 ";
    CHECK(run_cli(base + "--out " + out1.string()) == 0);
    CHECK(run_cli(base + "--out " + out2.string()) == 0);
    CHECK(slurp(out1 / "trace.csv") == slurp(out2 / "trace.csv"));
    CHECK(slurp(out1 / "ensemble_stats.csv") == slurp(out2 / "ensemble_stats.csv"));
    // manifests embed the (distinct) output directories; the semantic hash
    // must nevertheless agree
    auto hash_of = [&](const std::filesystem::path& p) {
        const std::string text = slurp(p / "manifest.json");
        const auto pos = text.find("config_hash");
        REQUIRE(pos != std::string::npos);
        return text.substr(pos, 40);
    };
    CHECK(hash_of(out1) == hash_of(out2));

    // invalid input: exit 1 with a descriptive error
    CHECK(run_cli("solve --coefficient bogus --out " + (dir / "bad").string()) == 1);
    // non-convergence: exit 2
    CHECK(run_cli("solve --steps 10 --replicates 100 --tol 1e-13 --max-iter 1 --out " +
                  (dir / "flag").string()) == 2);

    // config file + flag override: the flag wins and lands in the manifest
    {
        std::ofstream cfg(dir / "cfg.json");
        cfg << R"({"steps": 40, "replicates": 50, "picard": {"max_iter": 3}})";
        cfg.close();
        const auto out = dir / "cfgrun";
        CHECK(run_cli("solve --config " + (dir / "cfg.json").string() +
                      " --steps 12 --out " + out.string()) == 0);
        const std::string manifest = slurp(out / "manifest.json");
        CHECK(manifest.find("\"steps\": 12") != std::string::npos);
        CHECK(manifest.find("\"replicates\": 50") != std::string::npos);
        CHECK(manifest.find("\"max_iter\": 3") != std::string::npos);
    }
}
#endif
