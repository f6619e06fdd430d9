#pragma once

#include "gsde/sublinear.hpp"

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace gsde {

/// Coefficient triple (b, h_ij, sigma_j) of a distribution-dependent
/// equation, evaluated at (t, x, F) with a declared joint Lipschitz
/// constant K in (|x - y| + d1(F1, F2)).
///
/// Coefficients are compiled per (time, distribution) step: `Compiler`
/// receives (t, F) once, does whatever distribution-level work it needs, and
/// returns a cheap per-state evaluator used for every scenario of that step.
/// Empty compilers stand for identically-zero coefficients.
class Coefficients {
public:
    /// Writes the coefficient value at state x into `out` (state_dim entries).
    using StateFn = std::function<void(std::span<const double> x, std::span<double> out)>;
    using Compiler =
        std::function<StateFn(double t, const EmpiricalSublinearDistribution& F)>;

    Coefficients(std::size_t state_dim, std::size_t driver_dim, double lipschitz_K,
                 Compiler drift, std::vector<Compiler> quad_var,
                 std::vector<Compiler> diffusion);

    std::size_t state_dim() const { return n_; }
    std::size_t driver_dim() const { return d_; }
    std::size_t pair_count() const { return d_ * (d_ + 1) / 2; }
    double lipschitz_constant() const { return k_; }

    bool has_drift() const { return static_cast<bool>(drift_); }
    bool has_quad_var(std::size_t pair) const { return static_cast<bool>(quad_var_[pair]); }
    bool has_diffusion(std::size_t j) const { return static_cast<bool>(diffusion_[j]); }

    StateFn compile_drift(double t, const EmpiricalSublinearDistribution& F) const;
    StateFn compile_quad_var(std::size_t pair, double t,
                             const EmpiricalSublinearDistribution& F) const;
    StateFn compile_diffusion(std::size_t j, double t,
                              const EmpiricalSublinearDistribution& F) const;

    /// Direct single-point evaluation (spot checks and tests).
    std::vector<double> eval_drift(double t, std::span<const double> x,
                                   const EmpiricalSublinearDistribution& F) const;
    std::vector<double> eval_quad_var(std::size_t pair, double t, std::span<const double> x,
                                      const EmpiricalSublinearDistribution& F) const;
    std::vector<double> eval_diffusion(std::size_t j, double t, std::span<const double> x,
                                       const EmpiricalSublinearDistribution& F) const;

private:
    std::size_t n_, d_;
    double k_;
    Compiler drift_;
    std::vector<Compiler> quad_var_;
    std::vector<Compiler> diffusion_;
};

/// Pointwise kernel (t, x, y) -> R^n for the mean-field construction.
using MeanFieldKernel =
    std::function<void(double t, std::span<const double> x, std::span<const double> y,
                       std::span<double> out)>;

/// Builds coefficients of the mean-field form b(t, x, F) = F(b'(t, x, .)),
/// applied componentwise: the y-section of each kernel component is wrapped
/// as a test function and fed to the distribution. Empty kernels are zero.
Coefficients mean_field_coefficients(MeanFieldKernel b, std::vector<MeanFieldKernel> h,
                                     std::vector<MeanFieldKernel> sigma, double lipschitz_K,
                                     std::size_t state_dim, std::size_t driver_dim);

/// Named coefficient families selectable from configs and the CLI.
/// Parameters are flat name -> value maps.
using CoefficientParams = std::map<std::string, double>;
using CoefficientBuilder = std::function<Coefficients(
    const CoefficientParams& params, std::size_t state_dim, std::size_t driver_dim)>;

/// Registry of built-in families: zero, constant-drift, ou, mean-field-ou,
/// mean-field-example.
const std::map<std::string, CoefficientBuilder>& coefficient_registry();

/// Lookup + build; unknown names raise InputError listing the registry.
Coefficients make_coefficients(const std::string& name, const CoefficientParams& params,
                               std::size_t state_dim, std::size_t driver_dim);

/// Statistical spot check of the declared Lipschitz constant on `count`
/// sampled (t, x, y, F1, F2) tuples; returns the worst observed ratio
/// increment / (K (|x-y| + d1)). Values <= 1 + tol are consistent.
double lipschitz_spot_check(const Coefficients& c, double horizon, std::uint64_t seed,
                            std::size_t count);

} // namespace gsde
