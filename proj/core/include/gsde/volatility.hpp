#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gsde {

/// Volatility matrix (d x d, row-major). Scalars are 1 x 1.
struct VolMatrix {
    std::size_t dim = 1;
    std::vector<double> a; ///< dim * dim entries

    static VolMatrix scalar(double sigma) { return {1, {sigma}}; }
    double at(std::size_t i, std::size_t j) const { return a[i * dim + j]; }
    /// (theta theta^T)_{ij}
    double gram(std::size_t i, std::size_t j) const;
    /// a^T theta theta^T abar
    double quad(std::span<const double> v, std::span<const double> w) const;
    bool operator==(const VolMatrix&) const = default;
};

/// Admissible volatility set Theta defining the sublinear driver.
///
/// In dimension one Theta is the interval [sigma_min, sigma_max]; in higher
/// dimension it is an explicit finite list of matrices.
class VolatilityUncertainty {
public:
    /// d = 1, Theta = [sigma_min, sigma_max] with 0 <= sigma_min <= sigma_max.
    static VolatilityUncertainty interval(double sigma_min, double sigma_max);

    /// Finite matrix family (any dimension).
    static VolatilityUncertainty finite(std::vector<VolMatrix> thetas);

    std::size_t dimension() const { return dim_; }
    bool is_interval() const { return interval_; }
    double sigma_min() const { return sigma_min_; }
    double sigma_max() const { return sigma_max_; }
    const std::vector<VolMatrix>& thetas() const { return thetas_; }
    bool singleton() const;

    /// sigma^2_{a a^T} = max over Theta of a^T theta theta^T a.
    double sigma_sq_plus(std::span<const double> a) const;
    /// sigma^2_{-a a^T} = min over Theta of a^T theta theta^T a.
    double sigma_sq_minus(std::span<const double> a) const;

private:
    bool interval_ = true;
    std::size_t dim_ = 1;
    double sigma_min_ = 0.0, sigma_max_ = 0.0;
    std::vector<VolMatrix> thetas_;
};

/// G(A) = (1/2) sup over Theta of trace(theta theta^T A) for symmetric A.
/// In dimension one this is the closed form
/// G(alpha) = (sigma_max^2 alpha^+ - sigma_min^2 alpha^-) / 2.
double g_function(const VolatilityUncertainty& u, std::span<const double> A_rowmajor,
                  std::size_t dim);
double g_function(const VolatilityUncertainty& u, double alpha);

/// Finite family of volatility controls used for simulation.
class ControlGrid {
public:
    enum class Policy {
        static_per_path, ///< one constant matrix per control index
        per_step,        ///< per-control sampled piecewise-constant matrix path
    };

    /// Uniform grid of `levels` volatilities over the interval (d = 1), or
    /// the explicit matrix list for finite Theta. Duplicates are removed.
    static ControlGrid uniform(const VolatilityUncertainty& u, std::size_t levels,
                               Policy policy = Policy::static_per_path);

    /// Explicit control list; every control must lie in Theta.
    static ControlGrid explicit_controls(const VolatilityUncertainty& u,
                                         std::vector<VolMatrix> controls,
                                         Policy policy = Policy::static_per_path);

    std::size_t size() const { return controls_.size(); }
    const VolMatrix& control(std::size_t c) const { return controls_[c]; }
    Policy policy() const { return policy_; }

private:
    std::vector<VolMatrix> controls_;
    Policy policy_ = Policy::static_per_path;
};

} // namespace gsde
