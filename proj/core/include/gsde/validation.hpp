#pragma once

#include "gsde/solver.hpp"

#include <string>
#include <vector>

namespace gsde {

/// Closed-form constants of the a-priori solution estimates.
///
/// C_p is a free input (the moment inequality behind it leaves the constant
/// abstract); 4 is the classical choice for p = 2 and every report prints
/// the choice made.
struct EstimateConstants {
    double p = 2.0;
    double K = 1.0;
    double T = 1.0;
    double M = 1.0; ///< bound on int_0^T |phi(s, 0, F_0)|^p ds over the three families
    double C_p_choice = 4.0;
    double sigma_e = 0.0;  ///< sum over j of sigma^p_{e_j e_j^T}
    double C_sigma = 0.0;  ///< max over (i, j) of the pair-direction constant
    double C1 = 0.0;       ///< moment bound offset (depends on |x0|)
    double C2 = 0.0;       ///< moment bound growth rate
    double C3 = 0.0;       ///< initial-data Lipschitz constant

    /// Computes every derived constant from (p, K, T, M, volatility data,
    /// C_p choice) and the initial point.
    static EstimateConstants from(double p, double K, double T, double M,
                                  const VolatilityUncertainty& u, double C_p_choice,
                                  std::span<const double> x0);
};

/// Numeric bound M for coefficients evaluated along (s, 0, F_0): trapezoid
/// of |phi(s, 0, F_0)|^p over the grid, maxed over the three families.
double coefficient_origin_bound(const Coefficients& c, const TimeGrid& grid, double p);

/// One row of a validation report; margins are absolute (bound - lhs).
struct CheckRow {
    std::string check;
    double t = 0.0;
    double lhs = 0.0;
    double bound = 0.0;
    double margin = 0.0;
    double se = 0.0;
};

struct ValidationReport {
    std::string id;
    std::vector<CheckRow> rows;
    bool passed = true;
    std::vector<std::string> notes;
};

/// Moment estimate check: empirical max-over-controls mean of
/// sup_{s <= t} |X_s|^p against C1 exp(C2 t) at every grid time. p >= 2.
ValidationReport moment_bound_report(const PathEnsemble& ens,
                                     const EstimateConstants& consts);

struct LipschitzRunParams {
    VolatilityUncertainty u = VolatilityUncertainty::interval(0.2, 0.2);
    std::size_t control_levels = 1;
    TimeGrid grid = TimeGrid::uniform(1.0, 100);
    SolverOptions solver;
    double tol = 1e-3;
    std::size_t max_iter = 15;
    double C_p_choice = 4.0;
    std::vector<double> separations = {1.0, 0.1, 0.01};
};

/// Initial-data Lipschitz check: coupled solves (identical driver keys) from
/// x and from x + s * direction for each separation s; reports the empirical
/// Lipschitz ratio against the closed-form C3. p >= 2; x must differ from y.
ValidationReport initial_lipschitz_report(const Coefficients& c, std::span<const double> x,
                                          std::span<const double> y, double p,
                                          const LipschitzRunParams& params);

struct ClassicalCheckParams {
    double a = -1.0;     ///< private mean-reversion rate
    double b = 0.5;      ///< mean-field coupling
    double sigma = 0.2;  ///< volatility (sigma_min = sigma_max)
    double x0 = 1.0;
    double horizon = 1.0;
    std::size_t steps = 200;
    std::size_t replicates = 10000;
    std::uint64_t seed = 42;
    double tol = 1e-3;
    std::size_t max_iter = 15;
    ParallelOptions parallel;
};

struct ClassicalCheckResult {
    ValidationReport report;
    bool picard_converged = false;
    std::size_t picard_iterations = 0;
    double mean_at_horizon = 0.0;
    double closed_form_mean = 0.0;
    double mean_std_error = 0.0;
};

/// Degenerate-case oracle: with a singleton volatility the model collapses
/// to a classical mean-field linear equation whose mean and variance have
/// closed forms x0 e^{(a+b)t} and sigma^2 (e^{2at} - 1) / (2a). Deviations
/// are reported per grid time in standard-error units.
ClassicalCheckResult classical_limit_check(const ClassicalCheckParams& params);

struct RateCheckResult {
    ValidationReport report;
    double fitted_constant = 0.0; ///< smallest C making every envelope check pass
    std::size_t usable_rows = 0;
};

/// Checks the factorial iteration envelope
/// delta_k^2 <= C^k (T^k / k!) delta_0^2 on the recorded trace, masking
/// iterations whose delta sits below the metric noise floor. Needs at least
/// three usable iterations beyond delta_0.
RateCheckResult picard_rate_check(const ConvergenceTrace& trace, double horizon,
                                  double C_T_estimate, double noise_floor = 1e-7);

} // namespace gsde
