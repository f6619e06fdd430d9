#include "gsde/solver.hpp"

#include "driver_common.hpp"
#include "gsde/errors.hpp"
#include "gsde/rng.hpp"

#include <chrono>
#include <cmath>

namespace gsde {

PathEnsemble euler_solve_frozen(const Coefficients& c, const DistributionProcess& frozen,
                                std::span<const double> x0, const VolatilityUncertainty& u,
                                const ControlGrid& cg, const TimeGrid& grid,
                                const SolverOptions& opts) {
    if (!(frozen.grid() == grid))
        throw InputError("euler_solve_frozen: frozen process grid mismatch");
    if (x0.size() != c.state_dim())
        throw InputError("euler_solve_frozen: x0 dimension mismatch");
    if (frozen.dimension() != c.state_dim())
        throw InputError("euler_solve_frozen: frozen process dimension mismatch");
    if (u.dimension() != c.driver_dim())
        throw InputError("euler_solve_frozen: driver dimension mismatch");
    for (double v : x0)
        if (!std::isfinite(v)) throw InputError("euler_solve_frozen: non-finite x0");
    if (opts.replicates < 1)
        throw InputError("euler_solve_frozen: need at least one replicate");

    const std::size_t n = c.state_dim();
    const std::size_t d = c.driver_dim();
    const std::size_t pairs = c.pair_count();
    const std::size_t steps = grid.steps();
    const std::size_t np = grid.size();
    const std::size_t controls = cg.size();
    const std::size_t reps = opts.replicates;

    // compile all per-step coefficient evaluators up front; they are shared
    // read-only by every scenario worker
    std::vector<Coefficients::StateFn> drift(steps);
    std::vector<Coefficients::StateFn> qvfn(steps * pairs);
    std::vector<Coefficients::StateFn> difffn(steps * d);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = grid.time(k);
        const auto& F = frozen.at(k);
        drift[k] = c.compile_drift(t, F);
        for (std::size_t pair = 0; pair < pairs; ++pair)
            qvfn[k * pairs + pair] = c.compile_quad_var(pair, t, F);
        for (std::size_t j = 0; j < d; ++j)
            difffn[k * d + j] = c.compile_diffusion(j, t, F);
    }

    PathEnsemble::Data data{grid, u};
    data.replicates = reps;
    data.state_dim = n;
    data.driver_dim = d;
    data.seed = opts.seed;
    data.common_random_numbers = true;
    data.control_count = controls;
    data.theta_per_step = detail::control_path(cg, grid, opts.seed);
    data.qv = detail::accumulate_variation(data.theta_per_step, grid, controls, d);

    data.states.assign(controls * reps * np * n, 0.0);
    data.driver.assign(controls * reps * np * d, 0.0);
    double* states = data.states.data();
    double* driver = data.driver.data();
    const auto& theta = data.theta_per_step;
    const std::uint64_t seed = opts.seed;
    const double guard = opts.divergence_guard;

    parallel_for(controls * reps, opts.parallel, [&](std::size_t begin, std::size_t end) {
        std::vector<double> xi(d), binc(d), tmp(n), x(n);
        for (std::size_t s = begin; s < end; ++s) {
            const std::size_t ctrl = s / reps;
            const std::size_t r = s % reps;
            double* xpath = states + s * np * n;
            double* bpath = driver + s * np * d;
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = x0[i];
                xpath[i] = x0[i];
            }
            for (std::size_t k = 0; k < steps; ++k) {
                const double dt = grid.dt(k);
                const double sdt = std::sqrt(dt);
                for (std::size_t j = 0; j < d; ++j)
                    xi[j] = rng::standard_normal(seed, 0, static_cast<std::uint32_t>(r),
                                                 static_cast<std::uint32_t>(k),
                                                 static_cast<std::uint32_t>(j));
                const VolMatrix& th = theta[ctrl * steps + k];
                for (std::size_t i = 0; i < d; ++i) {
                    double inc = 0.0;
                    for (std::size_t j = 0; j < d; ++j) inc += th.at(i, j) * xi[j];
                    binc[i] = inc * sdt;
                    bpath[(k + 1) * d + i] = bpath[k * d + i] + binc[i];
                }

                if (const auto& fn = drift[k]; fn) {
                    fn(x, tmp);
                    for (std::size_t i = 0; i < n; ++i) x[i] += tmp[i] * dt;
                }
                {
                    std::size_t pair = 0;
                    for (std::size_t i = 0; i < d; ++i)
                        for (std::size_t j = i; j < d; ++j, ++pair) {
                            const auto& fn = qvfn[k * pairs + pair];
                            if (!fn) continue;
                            const double dqv = th.gram(i, j) * dt;
                            fn(x, tmp);
                            for (std::size_t comp = 0; comp < n; ++comp)
                                x[comp] += tmp[comp] * dqv;
                        }
                }
                for (std::size_t j = 0; j < d; ++j) {
                    const auto& fn = difffn[k * d + j];
                    if (!fn) continue;
                    fn(x, tmp);
                    for (std::size_t comp = 0; comp < n; ++comp)
                        x[comp] += tmp[comp] * binc[j];
                }

                for (std::size_t i = 0; i < n; ++i) {
                    if (!std::isfinite(x[i]) || std::abs(x[i]) > guard)
                        throw DivergenceError("euler_solve_frozen: state diverged", k);
                    xpath[(k + 1) * n + i] = x[i];
                }
            }
        }
    });

    return PathEnsemble(std::move(data));
}

PicardResult picard_solve(const Coefficients& c, std::span<const double> x0,
                          const VolatilityUncertainty& u, const ControlGrid& cg,
                          const TimeGrid& grid, const SolverOptions& opts,
                          const PicardOptions& picard) {
    if (!(picard.tol > 0.0)) throw InputError("picard_solve: tol must be positive");
    if (picard.max_iter < 1) throw InputError("picard_solve: max_iter must be >= 1");

    using clock = std::chrono::steady_clock;
    const MetricOptions metric_opts;

    DistributionProcess init = picard.initial
                                   ? *picard.initial
                                   : DistributionProcess::dirac(grid, x0);
    if (!(init.grid() == grid))
        throw InputError("picard_solve: initialization grid mismatch");

    auto thin_process = [&](const DistributionProcess& p, std::size_t cap) {
        std::vector<EmpiricalSublinearDistribution> entries;
        entries.reserve(p.size());
        for (std::size_t k = 0; k < p.size(); ++k) entries.push_back(thin(p.at(k), cap));
        return DistributionProcess(p.grid(), std::move(entries));
    };

    ConvergenceTrace trace;
    bool converged = false;
    double thinning_delta = 0.0;
    const std::size_t all = static_cast<std::size_t>(-1);

    auto t0 = clock::now();
    PathEnsemble ens = euler_solve_frozen(c, init, x0, u, cg, grid, opts);
    DistributionProcess current = distribution_process(ens);
    DistributionProcess current_thin = thin_process(current, opts.thin_cap);
    {
        // delta_0: distance between the first iterate and the initialization
        const double delta0 =
            d1T(current_thin, thin_process(init, opts.thin_cap), all, metric_opts).value;
        const double secs = std::chrono::duration<double>(clock::now() - t0).count();
        trace.rows.push_back({0, delta0, secs, opts.replicates * cg.size(), cg.size()});
    }

    for (std::size_t k = 1; k <= picard.max_iter && !converged; ++k) {
        t0 = clock::now();
        PathEnsemble next_ens = euler_solve_frozen(c, current, x0, u, cg, grid, opts);
        DistributionProcess next = distribution_process(next_ens);
        DistributionProcess next_thin = thin_process(next, opts.thin_cap);
        const double delta = d1T(next_thin, current_thin, all, metric_opts).value;
        const double secs = std::chrono::duration<double>(clock::now() - t0).count();
        trace.rows.push_back({k, delta, secs, opts.replicates * cg.size(), cg.size()});

        if (delta < picard.tol) {
            converged = true;
            // thinning bias of the final delta: the same distance on doubled caps
            const double wide = d1T(thin_process(next, 2 * opts.thin_cap),
                                    thin_process(current, 2 * opts.thin_cap), all,
                                    metric_opts)
                                    .value;
            thinning_delta = std::abs(wide - delta);
        }
        ens = std::move(next_ens);
        current = std::move(next);
        current_thin = std::move(next_thin);
    }

    return PicardResult{std::move(ens), std::move(current), std::move(trace), converged,
                        thinning_delta};
}

} // namespace gsde
