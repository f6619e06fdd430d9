#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace gsde {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

/// Dense linear program
///
///     maximize    objective . x
///     subject to  row_k . x <= rhs_k          (k = 0..num_rows-1)
///                 lower <= x <= upper          (finite bounds, elementwise)
///
/// Finite variable bounds are required; the metric problems this backend
/// serves always have natural ones.
struct LpProblem {
    std::size_t num_vars = 0;
    std::vector<double> objective;
    std::vector<double> rows; ///< row-major, num_rows x num_vars
    std::vector<double> rhs;
    std::vector<double> lower;
    std::vector<double> upper;

    explicit LpProblem(std::size_t vars = 0)
        : num_vars(vars), objective(vars, 0.0), lower(vars, 0.0), upper(vars, 0.0) {}

    std::size_t num_rows() const { return rhs.size(); }
    void add_row(std::span<const double> coefficients, double b);
};

struct LpSolution {
    LpStatus status = LpStatus::optimal;
    double objective = 0.0;
    std::vector<double> x;
};

/// Abstract LP backend so the metric code does not commit to a solver.
class LpBackend {
public:
    virtual ~LpBackend() = default;
    virtual LpSolution solve(const LpProblem& problem) const = 0;
};

/// Dense two-phase primal simplex with bounded variables.
///
/// Pivoting is deterministic (largest reduced cost, ties to the lowest
/// index) with a Bland's-rule fallback against cycling. Adequate for desk
/// scale: hundreds of variables, constraint matrices held densely.
class DenseSimplex final : public LpBackend {
public:
    explicit DenseSimplex(double tol = 1e-9) : tol_(tol) {}
    LpSolution solve(const LpProblem& problem) const override;

private:
    double tol_;
};

/// Process-wide default backend (a DenseSimplex).
const LpBackend& default_lp_backend();

} // namespace gsde
