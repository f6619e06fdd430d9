#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gsde/errors.hpp"
#include "gsde/validation.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace gsde;

TEST_CASE("estimate constants: hand-computed spot values") {
    // p = 2, K = 1, T = 1, M = 1, sigma in [anything, 2], C_p = 4, x = 1
    const auto u = VolatilityUncertainty::interval(1.0, 2.0);
    const std::vector<double> x{1.0};
    const auto e = EstimateConstants::from(2.0, 1.0, 1.0, 1.0, u, 4.0, x);
    // sigma_e = sigma_max^p = 4; C_sigma = ((4 sigma_max^2 + 0)/4)^p = 16
    CHECK(e.sigma_e == doctest::Approx(4.0));
    CHECK(e.C_sigma == doctest::Approx(16.0));
    // bracket = 1 + 16 + 4*4 = 33
    CHECK(e.C1 == doctest::Approx(4.0 * 1.0 + 8.0 * 33.0)); // 268... see below
    CHECK(e.C2 == doctest::Approx(32.0 * 33.0));            // 2^5 * 33 = 1056
    // C3 = 4^{p-1} exp(2^{3p-2} K^p bracket T) = 4 e^{16 * 33}
    CHECK(std::log(e.C3 / 4.0) == doctest::Approx(16.0 * 33.0).epsilon(1e-12));
}

TEST_CASE("estimate constants: x enters only through C1") {
    const auto u = VolatilityUncertainty::interval(0.0, 1.0);
    const std::vector<double> x0{0.0}, x2{2.0};
    const auto a = EstimateConstants::from(2.0, 1.0, 1.0, 1.0, u, 4.0, x0);
    const auto b = EstimateConstants::from(2.0, 1.0, 1.0, 1.0, u, 4.0, x2);
    CHECK(b.C1 - a.C1 == doctest::Approx(4.0 * 4.0)); // 4^{p-1} |x|^p = 4 * 4
    CHECK(a.C2 == b.C2);
    CHECK(a.C3 == b.C3);
    CHECK_THROWS_AS(EstimateConstants::from(1.5, 1.0, 1.0, 1.0, u, 4.0, x0), InputError);
}

TEST_CASE("coefficient origin bound: constant diffusion integrates exactly") {
    const auto grid = TimeGrid::uniform(1.0, 50);
    CoefficientParams p{{"a", -1.0}, {"b", 0.5}, {"sigma", 0.2}};
    const auto coeff = make_coefficients("mean-field-ou", p, 1, 1);
    // at the origin with the origin dirac: drift = 0, diffusion = 0.2
    CHECK(coefficient_origin_bound(coeff, grid, 2.0) == doctest::Approx(0.04).epsilon(1e-12));
}

namespace {

PathEnsemble solve_mean_field_ou(std::size_t steps, std::size_t reps, std::uint64_t seed,
                                 double sigma = 0.2) {
    const auto u = VolatilityUncertainty::interval(sigma, sigma);
    const auto cg = ControlGrid::uniform(u, 1);
    const auto grid = TimeGrid::uniform(1.0, steps);
    CoefficientParams p{{"a", -1.0}, {"b", 0.5}, {"sigma", sigma}};
    const auto coeff = make_coefficients("mean-field-ou", p, 1, 1);
    SolverOptions opts;
    opts.replicates = reps;
    opts.seed = seed;
    PicardOptions popts;
    popts.tol = 1e-3;
    popts.max_iter = 15;
    const std::vector<double> x0{1.0};
    auto result = picard_solve(coeff, x0, u, cg, grid, opts, popts);
    REQUIRE(result.converged);
    return std::move(result.ensemble);
}

} // namespace

TEST_CASE("moment bound: zero dynamics sit under the constant bound") {
    const auto u = VolatilityUncertainty::interval(0.0, 0.0);
    const auto cg = ControlGrid::uniform(u, 1);
    const auto grid = TimeGrid::uniform(1.0, 10);
    const auto zero = make_coefficients("zero", {}, 1, 1);
    const std::vector<double> x0{1.5};
    SolverOptions opts;
    opts.replicates = 10;
    opts.seed = 3;
    const auto ens = euler_solve_frozen(zero, DistributionProcess::dirac(grid, x0), x0, u,
                                        cg, grid, opts);
    const auto consts = EstimateConstants::from(2.0, 0.0, 1.0, 0.0, u, 4.0, x0);
    const auto report = moment_bound_report(ens, consts);
    CHECK(report.passed);
    // LHS is |x|^p at every time; C1 is 4^{p-1} |x|^p, factor 4 of slack
    CHECK(report.rows.front().lhs == doctest::Approx(2.25));
    CHECK(report.rows.front().bound == doctest::Approx(9.0));
}

TEST_CASE("moment bound: mean-field ou margins stay nonnegative") {
    const auto ens = solve_mean_field_ou(100, 2000, 5);
    CoefficientParams p{{"a", -1.0}, {"b", 0.5}, {"sigma", 0.2}};
    const auto coeff = make_coefficients("mean-field-ou", p, 1, 1);
    const double M = coefficient_origin_bound(coeff, ens.grid(), 2.0);
    const auto consts = EstimateConstants::from(2.0, coeff.lipschitz_constant(), 1.0, M,
                                                ens.uncertainty(), 4.0,
                                                std::vector<double>{1.0});
    const auto report = moment_bound_report(ens, consts);
    CHECK(report.passed);
    for (const auto& row : report.rows) CHECK(row.margin >= 0.0);
    // t = 0 row: lhs = |x0|^p = 1 with C1 >= 4
    CHECK(report.rows.front().lhs == doctest::Approx(1.0));
    CHECK(report.rows.front().bound >= 4.0);
}

TEST_CASE("initial lipschitz: identical starts coincide under coupling") {
    // x = y handled by the zero-coefficient identity rather than the ratio
    const auto u = VolatilityUncertainty::interval(0.3, 0.3);
    const auto cg = ControlGrid::uniform(u, 1);
    const auto grid = TimeGrid::uniform(1.0, 20);
    CoefficientParams p{{"a", -1.0}, {"b", 0.5}, {"sigma", 0.3}};
    const auto coeff = make_coefficients("mean-field-ou", p, 1, 1);
    SolverOptions opts;
    opts.replicates = 200;
    opts.seed = 6;
    PicardOptions popts;
    popts.tol = 1e-3;
    popts.max_iter = 10;
    const std::vector<double> x0{1.0};
    const auto a = picard_solve(coeff, x0, u, cg, grid, opts, popts);
    const auto b = picard_solve(coeff, x0, u, cg, grid, opts, popts);
    for (std::size_t r = 0; r < 200; ++r)
        for (std::size_t k = 0; k <= 20; ++k)
            CHECK(a.ensemble.state_at(0, r, k, 0) == b.ensemble.state_at(0, r, k, 0));
    // the ratio branch refuses x == y
    LipschitzRunParams params;
    params.u = u;
    params.grid = grid;
    params.solver = opts;
    CHECK_THROWS_AS(initial_lipschitz_report(coeff, x0, x0, 2.0, params), InputError);
}

TEST_CASE("initial lipschitz: zero coefficients give the constant-gap identity") {
    // b = h = sigma = 0 and K = 0: paths stay at their starts, the sup
    // difference is |x - y|^p exactly and C3 collapses to 4^{p-1}
    const auto zero = make_coefficients("zero", {}, 1, 1);
    LipschitzRunParams params;
    params.u = VolatilityUncertainty::interval(0.0, 0.0);
    params.grid = TimeGrid::uniform(1.0, 10);
    params.solver.replicates = 20;
    params.solver.seed = 21;
    params.max_iter = 3;
    const std::vector<double> x{1.0}, y{2.5};
    const auto report = initial_lipschitz_report(zero, x, y, 2.0, params);
    for (const auto& row : report.rows) {
        CHECK(row.lhs == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(row.bound == doctest::Approx(4.0).epsilon(1e-12));
        CHECK(row.margin >= 0.0);
    }
}

TEST_CASE("initial lipschitz: ratios bounded by C3 across separations") {
    const auto u = VolatilityUncertainty::interval(0.2, 0.2);
    CoefficientParams p{{"a", -1.0}, {"b", 0.5}, {"sigma", 0.2}};
    const auto coeff = make_coefficients("mean-field-ou", p, 1, 1);
    LipschitzRunParams params;
    params.u = u;
    params.grid = TimeGrid::uniform(1.0, 50);
    params.solver.replicates = 1000;
    params.solver.seed = 7;
    params.tol = 1e-3;
    params.max_iter = 12;
    const std::vector<double> x{1.0}, y{2.0};
    const auto report = initial_lipschitz_report(coeff, x, y, 2.0, params);
    REQUIRE(report.rows.size() == 3);
    CHECK(report.passed);
    // contraction under coupling: the sup over [0, t] includes t = 0, so the
    // ratio is exactly one at every separation, far below C3
    for (const auto& row : report.rows) {
        CHECK(row.lhs == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(row.margin >= 0.0);
        CHECK(row.bound > 1.0);
    }
    const double r0 = report.rows[0].lhs;
    for (const auto& row : report.rows)
        CHECK(std::abs(row.lhs - r0) <= 3.0 * (row.se + report.rows[0].se) + 0.05 * r0);
    // the un-normalized estimate vanishes monotonically with the separation
    double prev = 1e300;
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const double s = params.separations[i];
        const double absolute = report.rows[i].lhs * std::pow(s, 2.0);
        CHECK(absolute < prev);
        prev = absolute;
    }
}

TEST_CASE("classical limit: mean-field ou mean and variance follow closed forms") {
    ClassicalCheckParams params;
    params.a = -1.0;
    params.b = 0.5;
    params.sigma = 0.2;
    params.x0 = 1.0;
    params.steps = 200;
    params.replicates = 4000;
    params.seed = 11;
    const auto result = classical_limit_check(params);
    CHECK(result.picard_converged);
    const double target = std::exp(-0.5);
    CHECK(result.closed_form_mean == doctest::Approx(target));
    CHECK(std::abs(result.mean_at_horizon - target) <=
          std::max(3.0 * result.mean_std_error, 0.02 * target));
    // per-time rows: deviations within a few standard errors plus Euler bias
    for (const auto& row : result.report.rows) {
        if (row.check == "classical_mean")
            CHECK(std::abs(row.margin) <= 4.0 * row.se + 2e-3);
        else
            CHECK(std::abs(row.margin) <= 5.0 * row.se + 2e-3);
    }
}

TEST_CASE("classical limit: plain ou when the coupling vanishes") {
    ClassicalCheckParams params;
    params.a = -1.0;
    params.b = 0.0;
    params.sigma = 0.3;
    params.steps = 100;
    params.replicates = 2000;
    params.seed = 12;
    const auto result = classical_limit_check(params);
    CHECK(result.closed_form_mean == doctest::Approx(std::exp(-1.0)));
    CHECK(std::abs(result.mean_at_horizon - result.closed_form_mean) <=
          std::max(3.0 * result.mean_std_error, 0.02 * result.closed_form_mean));
}

TEST_CASE("classical limit: zero volatility is the deterministic flow") {
    ClassicalCheckParams params;
    params.a = -1.0;
    params.b = 0.5;
    params.sigma = 0.0;
    params.steps = 100;
    params.replicates = 50;
    params.seed = 13;
    const auto result = classical_limit_check(params);
    for (const auto& row : result.report.rows)
        if (row.check == "classical_var") CHECK(row.lhs == 0.0); // exactly
}

TEST_CASE("picard rate check: envelope with a fitted constant") {
    const auto u = VolatilityUncertainty::interval(0.2, 0.2);
    const auto cg = ControlGrid::uniform(u, 1);
    const auto grid = TimeGrid::uniform(1.0, 50);
    CoefficientParams p{{"a", -1.0}, {"b", 0.5}, {"sigma", 0.2}};
    const auto coeff = make_coefficients("mean-field-ou", p, 1, 1);
    SolverOptions opts;
    opts.replicates = 2000;
    opts.seed = 14;
    PicardOptions popts;
    popts.tol = 1e-7; // run deep so several iterations are recorded
    popts.max_iter = 12;
    const std::vector<double> x0{1.0};
    const auto sol = picard_solve(coeff, x0, u, cg, grid, opts, popts);
    REQUIRE(sol.trace.rows.size() >= 4);

    const auto fit = picard_rate_check(sol.trace, 1.0, 1.0, 1e-9);
    CHECK(fit.fitted_constant > 0.0);
    CHECK(std::isfinite(fit.fitted_constant));
    CHECK(fit.usable_rows >= 3);
    // re-checking against a constant above the fit passes everywhere
    const auto verify =
        picard_rate_check(sol.trace, 1.0, fit.fitted_constant * 1.0001, 1e-9);
    CHECK(verify.report.passed);

    // fitted constant is stable under replicate doubling
    SolverOptions opts2 = opts;
    opts2.replicates = 4000;
    const auto sol2 = picard_solve(coeff, x0, u, cg, grid, opts2, popts);
    const auto fit2 = picard_rate_check(sol2.trace, 1.0, 1.0, 1e-9);
    CHECK(fit2.fitted_constant ==
          doctest::Approx(fit.fitted_constant).epsilon(0.5));
}

TEST_CASE("picard rate check: masking and insufficient traces") {
    ConvergenceTrace trace;
    trace.rows.push_back({0, 0.5, 0.0, 100, 1});
    trace.rows.push_back({1, 0.1, 0.0, 100, 1});
    trace.rows.push_back({2, 1e-12, 0.0, 100, 1}); // below the floor: masked
    trace.rows.push_back({3, 1e-12, 0.0, 100, 1});
    CHECK_THROWS_AS(picard_rate_check(trace, 1.0, 2.0, 1e-7), InputError);

    trace.rows[2].delta = 0.02;
    trace.rows[3].delta = 0.004;
    const auto fit = picard_rate_check(trace, 1.0, 10.0, 1e-7);
    CHECK(fit.usable_rows == 3);

    ConvergenceTrace degenerate;
    degenerate.rows.push_back({0, 1e-12, 0.0, 100, 1});
    CHECK_THROWS_AS(picard_rate_check(degenerate, 1.0, 2.0, 1e-7), InputError);
}

TEST_CASE("validation reports: p below two rejected") {
    const auto u = VolatilityUncertainty::interval(0.1, 0.1);
    const auto cg = ControlGrid::uniform(u, 1);
    const auto grid = TimeGrid::uniform(1.0, 5);
    const auto zero = make_coefficients("zero", {}, 1, 1);
    const std::vector<double> x0{1.0};
    SolverOptions opts;
    opts.replicates = 5;
    const auto ens = euler_solve_frozen(zero, DistributionProcess::dirac(grid, x0), x0, u,
                                        cg, grid, opts);
    auto consts = EstimateConstants::from(2.0, 0.0, 1.0, 0.0, u, 4.0, x0);
    consts.p = 1.0;
    CHECK_THROWS_AS(moment_bound_report(ens, consts), InputError);
}
