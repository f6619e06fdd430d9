#pragma once

#include "gsde/measure.hpp"
#include "gsde/test_function.hpp"
#include "gsde/time_grid.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gsde {

/// Sublinear distribution represented by a finite set of weighted measures.
///
/// The functional is F(phi) = max over representing measures of the weighted
/// mean of phi. Monotonicity, constant preservation, sub-additivity and
/// positive homogeneity hold exactly on this representation; a finite set of
/// measures under-approximates a continuum of scenarios from below.
class EmpiricalSublinearDistribution {
public:
    explicit EmpiricalSublinearDistribution(std::vector<WeightedMeasure> measures);

    /// Dirac distribution (single point mass, single measure).
    static EmpiricalSublinearDistribution dirac(std::span<const double> x);
    static EmpiricalSublinearDistribution dirac1d(double x);

    std::size_t dimension() const { return dim_; }
    std::size_t measure_count() const { return measures_.size(); }
    const WeightedMeasure& measure(std::size_t i) const { return measures_[i]; }
    const std::vector<WeightedMeasure>& measures() const { return measures_; }

    /// F(phi) = max over measures of the phi-mean.
    double evaluate(const TestFunction& phi) const;

    struct Evaluation {
        double value = 0.0;
        std::size_t attaining_measure = 0; ///< first index attaining the max
    };
    Evaluation evaluate_detailed(const TestFunction& phi) const;

    /// All support points of all measures, flat, in measure order.
    std::vector<double> union_support() const;

private:
    std::size_t dim_ = 0;
    std::vector<WeightedMeasure> measures_;
};

/// Deterministic stride subsample of each measure down to at most `cap`
/// particles (weights renormalized). Used to bound metric LP sizes.
EmpiricalSublinearDistribution thin(const EmpiricalSublinearDistribution& dist,
                                    std::size_t cap);

/// One axiom verdict with a human-readable witness.
struct AxiomCheck {
    std::string axiom;
    bool applicable = true; ///< false when the hypothesis fails (vacuous pass)
    bool pass = true;
    double lhs = 0.0;
    double rhs = 0.0;
    std::string witness;
};

struct AxiomReport {
    std::vector<AxiomCheck> checks;
    bool all_pass = true;
};

/// Verifies the four sublinear-expectation axioms on the representation:
/// monotonicity (with the pointwise hypothesis tested on the union support
/// plus `extra_points`), constant preservation, sub-additivity and positive
/// homogeneity with factor `lambda` (must be >= 0).
AxiomReport check_axioms(const EmpiricalSublinearDistribution& dist,
                         const TestFunction& phi, const TestFunction& psi, double lambda,
                         std::span<const double> extra_points = {});

/// Time-indexed family of sublinear distributions on a grid.
class DistributionProcess {
public:
    DistributionProcess(TimeGrid grid, std::vector<EmpiricalSublinearDistribution> entries);

    /// Process constant in time: the Dirac distribution at x at every grid time.
    static DistributionProcess dirac(const TimeGrid& grid, std::span<const double> x);

    const TimeGrid& grid() const { return grid_; }
    std::size_t size() const { return entries_.size(); }
    std::size_t dimension() const { return entries_.front().dimension(); }
    const EmpiricalSublinearDistribution& at(std::size_t i) const { return entries_[i]; }

private:
    TimeGrid grid_;
    std::vector<EmpiricalSublinearDistribution> entries_;
};

} // namespace gsde
