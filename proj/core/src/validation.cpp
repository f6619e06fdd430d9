#include "gsde/validation.hpp"

#include "gsde/errors.hpp"

#include <algorithm>
#include <cmath>

namespace gsde {

EstimateConstants EstimateConstants::from(double p, double K, double T, double M,
                                          const VolatilityUncertainty& u, double C_p_choice,
                                          std::span<const double> x0) {
    if (!(p >= 2.0)) throw InputError("EstimateConstants: p must be >= 2");
    if (!(K >= 0.0) || !(T > 0.0) || !(M >= 0.0) || !(C_p_choice > 0.0))
        throw InputError("EstimateConstants: nonnegative inputs required");
    EstimateConstants e;
    e.p = p;
    e.K = K;
    e.T = T;
    e.M = M;
    e.C_p_choice = C_p_choice;

    const std::size_t d = u.dimension();
    std::vector<double> ei(d, 0.0), ej(d, 0.0), dir(d, 0.0);

    // sum over j of sigma^p along the coordinate directions
    e.sigma_e = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        std::fill(dir.begin(), dir.end(), 0.0);
        dir[j] = 1.0;
        e.sigma_e += std::pow(u.sigma_sq_plus(dir), p / 2.0);
    }

    // pair-direction constant, maxed over (i, j)
    e.C_sigma = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            std::fill(ei.begin(), ei.end(), 0.0);
            std::fill(ej.begin(), ej.end(), 0.0);
            ei[i] = 1.0;
            ej[j] = 1.0;
            std::vector<double> plus(d), minus(d);
            for (std::size_t k = 0; k < d; ++k) {
                plus[k] = ei[k] + ej[k];
                minus[k] = ei[k] - ej[k];
            }
            const double c =
                std::pow((u.sigma_sq_plus(plus) + u.sigma_sq_plus(minus)) / 4.0, p);
            e.C_sigma = std::max(e.C_sigma, c);
        }
    }

    double x_norm2 = 0.0;
    for (double v : x0) x_norm2 += v * v;
    const double x_norm_p = std::pow(std::sqrt(x_norm2), p);

    const double bracket = std::pow(T, p - 1.0) + e.C_sigma * std::pow(T, p - 1.0) +
                           C_p_choice * e.sigma_e * std::pow(T, p / 2.0 - 1.0);
    e.C1 = std::pow(4.0, p - 1.0) * x_norm_p + std::pow(8.0, p - 1.0) * M * bracket;
    e.C2 = std::pow(2.0, 4.0 * p - 3.0) * std::pow(K, p) * bracket;
    e.C3 = std::pow(4.0, p - 1.0) *
           std::exp(std::pow(2.0, 3.0 * p - 2.0) * std::pow(K, p) * bracket * T);
    return e;
}

double coefficient_origin_bound(const Coefficients& c, const TimeGrid& grid, double p) {
    const std::size_t n = c.state_dim();
    std::vector<double> origin(n, 0.0);
    const auto F0 = EmpiricalSublinearDistribution::dirac(origin);

    auto norm = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::sqrt(s);
    };
    auto family_integral = [&](auto&& eval) {
        // trapezoid of |phi(s, 0, F_0)|^p over the grid
        double acc = 0.0;
        double prev = std::pow(norm(eval(grid.time(0))), p);
        for (std::size_t k = 0; k < grid.steps(); ++k) {
            const double next = std::pow(norm(eval(grid.time(k + 1))), p);
            acc += 0.5 * (prev + next) * grid.dt(k);
            prev = next;
        }
        return acc;
    };

    double m = family_integral(
        [&](double t) { return c.eval_drift(t, origin, F0); });
    for (std::size_t pair = 0; pair < c.pair_count(); ++pair)
        m = std::max(m, family_integral([&](double t) {
                         return c.eval_quad_var(pair, t, origin, F0);
                     }));
    for (std::size_t j = 0; j < c.driver_dim(); ++j)
        m = std::max(m, family_integral([&](double t) {
                         return c.eval_diffusion(j, t, origin, F0);
                     }));
    return m;
}

namespace {

/// max over controls of the replicate mean of sup_{s <= t_k} |X_s|^p,
/// with the attaining control's standard error, at each grid index.
struct SupMomentCurve {
    std::vector<double> value;
    std::vector<double> se;
};

SupMomentCurve sup_moment_curve(const PathEnsemble& ens, double p) {
    const std::size_t np = ens.grid().size();
    const std::size_t n = ens.state_dim();
    SupMomentCurve curve;
    curve.value.assign(np, 0.0);
    curve.se.assign(np, 0.0);

    // running sup per scenario, reduced at each time index
    std::vector<ScenarioField> fields(np, ScenarioField(ens.control_count(),
                                                        ens.replicate_count()));
    for (std::size_t c = 0; c < ens.control_count(); ++c) {
        for (std::size_t r = 0; r < ens.replicate_count(); ++r) {
            double run = 0.0;
            for (std::size_t k = 0; k < np; ++k) {
                double norm2 = 0.0;
                for (std::size_t comp = 0; comp < n; ++comp) {
                    const double v = ens.state_at(c, r, k, comp);
                    norm2 += v * v;
                }
                run = std::max(run, std::pow(std::sqrt(norm2), p));
                fields[k].at(c, r) = run;
            }
        }
    }
    for (std::size_t k = 0; k < np; ++k) {
        const auto est = fields[k].sublinear();
        curve.value[k] = est.value;
        curve.se[k] = est.std_error;
    }
    return curve;
}

} // namespace

ValidationReport moment_bound_report(const PathEnsemble& ens,
                                     const EstimateConstants& consts) {
    if (!(consts.p >= 2.0)) throw InputError("moment_bound_report: p must be >= 2");
    ValidationReport report;
    report.id = "moment_bound";
    report.notes.push_back("C_p choice = " + std::to_string(consts.C_p_choice));
    report.notes.push_back("sup over s <= t is taken over grid points and "
                           "underestimates the continuous-time sup");

    const auto curve = sup_moment_curve(ens, consts.p);
    for (std::size_t k = 0; k < ens.grid().size(); ++k) {
        CheckRow row;
        row.check = "moment_bound";
        row.t = ens.grid().time(k);
        row.lhs = curve.value[k];
        row.bound = consts.C1 * std::exp(consts.C2 * row.t);
        row.margin = row.bound - row.lhs;
        row.se = curve.se[k];
        report.passed = report.passed && row.margin >= 0.0;
        report.rows.push_back(row);
    }
    return report;
}

ValidationReport initial_lipschitz_report(const Coefficients& c, std::span<const double> x,
                                          std::span<const double> y, double p,
                                          const LipschitzRunParams& params) {
    if (!(p >= 2.0)) throw InputError("initial_lipschitz_report: p must be >= 2");
    const std::size_t n = c.state_dim();
    if (x.size() != n || y.size() != n)
        throw InputError("initial_lipschitz_report: initial point dimension mismatch");
    double sep2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) sep2 += (x[i] - y[i]) * (x[i] - y[i]);
    if (sep2 == 0.0)
        throw InputError("initial_lipschitz_report: x and y must differ for the ratio");
    const double base_norm = std::sqrt(sep2);

    const ControlGrid cg = ControlGrid::uniform(params.u, params.control_levels);
    const double M = coefficient_origin_bound(c, params.grid, p);
    const auto consts = EstimateConstants::from(p, c.lipschitz_constant(),
                                                params.grid.horizon(), M, params.u,
                                                params.C_p_choice, x);

    ValidationReport report;
    report.id = "initial_lipschitz";
    report.notes.push_back("C3 = " + std::to_string(consts.C3));

    PicardOptions popts;
    popts.tol = params.tol;
    popts.max_iter = params.max_iter;
    const PicardResult base =
        picard_solve(c, x, params.u, cg, params.grid, params.solver, popts);

    for (double s : params.separations) {
        std::vector<double> shifted(n);
        for (std::size_t i = 0; i < n; ++i)
            shifted[i] = x[i] + s * (y[i] - x[i]) / base_norm;
        const PicardResult other =
            picard_solve(c, shifted, params.u, cg, params.grid, params.solver, popts);

        // coupled sup-difference per scenario; identical keys pair scenarios
        ScenarioField sup_diff(base.ensemble.control_count(),
                               base.ensemble.replicate_count());
        for (std::size_t ctrl = 0; ctrl < base.ensemble.control_count(); ++ctrl) {
            for (std::size_t r = 0; r < base.ensemble.replicate_count(); ++r) {
                double run = 0.0;
                for (std::size_t k = 0; k < params.grid.size(); ++k) {
                    double norm2 = 0.0;
                    for (std::size_t comp = 0; comp < n; ++comp) {
                        const double dv = base.ensemble.state_at(ctrl, r, k, comp) -
                                          other.ensemble.state_at(ctrl, r, k, comp);
                        norm2 += dv * dv;
                    }
                    run = std::max(run, std::pow(std::sqrt(norm2), p));
                }
                sup_diff.at(ctrl, r) = run;
            }
        }
        const auto est = sup_diff.sublinear();
        CheckRow row;
        row.check = "initial_lipschitz";
        row.t = s; // separation, not time
        row.lhs = est.value / std::pow(s, p);
        row.bound = consts.C3;
        row.margin = row.bound - row.lhs;
        row.se = est.std_error / std::pow(s, p);
        report.passed = report.passed && row.margin >= 0.0;
        report.rows.push_back(row);
    }
    return report;
}

ClassicalCheckResult classical_limit_check(const ClassicalCheckParams& params) {
    const auto u = VolatilityUncertainty::interval(params.sigma, params.sigma);
    if (!u.singleton())
        throw InputError("classical_limit_check: volatility set must be a singleton");
    const auto cg = ControlGrid::uniform(u, 1);
    const auto grid = TimeGrid::uniform(params.horizon, params.steps);

    // the driver carries the volatility level; a unit diffusion coefficient
    // avoids scaling the noise twice
    CoefficientParams cp{{"a", params.a}, {"b", params.b}, {"sigma", 1.0}};
    const Coefficients coeff = make_coefficients("mean-field-ou", cp, 1, 1);

    SolverOptions sopts;
    sopts.replicates = params.replicates;
    sopts.seed = params.seed;
    sopts.parallel = params.parallel;

    PicardOptions popts;
    popts.tol = params.tol;
    popts.max_iter = params.max_iter;

    const std::vector<double> x0{params.x0};
    const PicardResult sol = picard_solve(coeff, x0, u, cg, grid, sopts, popts);

    ClassicalCheckResult out;
    out.picard_converged = sol.converged;
    out.picard_iterations = sol.trace.rows.empty() ? 0 : sol.trace.rows.back().iteration;
    out.report.id = "classical_limit";

    const double rate = params.a + params.b;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid.time(k);
        std::vector<double> xs(params.replicates);
        for (std::size_t r = 0; r < params.replicates; ++r)
            xs[r] = sol.ensemble.state_at(0, r, k, 0);
        const MomentSummary m = summarize(xs);

        CheckRow mean_row;
        mean_row.check = "classical_mean";
        mean_row.t = t;
        mean_row.lhs = m.mean;
        mean_row.bound = params.x0 * std::exp(rate * t);
        mean_row.margin = mean_row.bound - mean_row.lhs;
        mean_row.se = m.std_error;
        out.report.rows.push_back(mean_row);

        CheckRow var_row;
        var_row.check = "classical_var";
        var_row.t = t;
        var_row.lhs = m.variance;
        var_row.bound = params.a == 0.0
                            ? params.sigma * params.sigma * t
                            : params.sigma * params.sigma *
                                  (std::exp(2.0 * params.a * t) - 1.0) / (2.0 * params.a);
        var_row.margin = var_row.bound - var_row.lhs;
        var_row.se = m.variance * std::sqrt(2.0 / std::max<std::size_t>(
                                                      1, params.replicates - 1));
        out.report.rows.push_back(var_row);

        if (k + 1 == grid.size()) {
            out.mean_at_horizon = m.mean;
            out.closed_form_mean = mean_row.bound;
            out.mean_std_error = m.std_error;
        }
    }
    return out;
}

RateCheckResult picard_rate_check(const ConvergenceTrace& trace, double horizon,
                                  double C_T_estimate, double noise_floor) {
    RateCheckResult out;
    out.report.id = "picard_rate";
    if (trace.rows.empty() || trace.rows.front().iteration != 0)
        throw InputError("picard_rate_check: trace must start at iteration 0");
    const double delta0 = trace.rows.front().delta;
    if (delta0 <= noise_floor)
        throw InputError("picard_rate_check: delta_0 is below the noise floor");

    double fitted = 0.0;
    std::size_t usable = 0;
    for (std::size_t i = 1; i < trace.rows.size(); ++i) {
        const auto& row = trace.rows[i];
        const double k = static_cast<double>(row.iteration);
        CheckRow check;
        check.check = "picard_rate";
        check.t = k;
        check.lhs = row.delta * row.delta;
        if (row.delta <= noise_floor) {
            // masked: below the metric noise floor
            check.bound = 0.0;
            check.margin = 0.0;
            check.se = -1.0; // marker for "excluded from the fit"
            out.report.rows.push_back(check);
            continue;
        }
        ++usable;
        double factorial = 1.0;
        for (std::size_t j = 2; j <= row.iteration; ++j) factorial *= static_cast<double>(j);
        const double envelope_unit = std::pow(horizon, k) / factorial * delta0 * delta0;
        check.bound = std::pow(C_T_estimate, k) * envelope_unit;
        check.margin = check.bound - check.lhs;
        check.se = 0.0;
        out.report.passed = out.report.passed && check.margin >= 0.0;
        out.report.rows.push_back(check);
        // smallest C making this row pass: (lhs / envelope_unit)^(1/k)
        fitted = std::max(fitted, std::pow(check.lhs / envelope_unit, 1.0 / k));
    }
    if (usable < 3)
        throw InputError("picard_rate_check: need at least three iterations above the "
                         "noise floor");
    out.fitted_constant = fitted;
    out.usable_rows = usable;
    out.report.notes.push_back("fitted C_T = " + std::to_string(fitted));
    return out;
}

} // namespace gsde
